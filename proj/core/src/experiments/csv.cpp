#include "isac/experiments/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isac::experiments {
namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, int line, const char* field) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("csv line " + std::to_string(line) + ": bad " + field + " '" + s + "'");
  }
}

template <typename T>
T parse_uint(const std::string& s, int line, const char* field) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("csv line " + std::to_string(line) + ": bad " + field + " '" + s + "'");
  return v;
}

void check_name(const std::string& s) {
  if (s.find_first_of(",\n\"") != std::string::npos)
    throw std::invalid_argument("csv field contains a delimiter: '" + s + "'");
}

}  // namespace

void ResultTable::add(ResultRow row) {
  check_name(row.sweep_name);
  check_name(row.metric);
  if (row.stderr_ < 0.0) throw std::invalid_argument("stderr must be >= 0");
  rows.push_back(std::move(row));
}

std::vector<ResultRow> ResultTable::select(const std::string& metric) const {
  std::vector<ResultRow> out;
  for (const auto& r : rows)
    if (r.metric == metric) out.push_back(r);
  return out;
}

const ResultRow& ResultTable::at(const std::string& metric, double sweep_value) const {
  for (const auto& r : rows)
    if (r.metric == metric && r.sweep_value == sweep_value) return r;
  throw std::out_of_range("no row for metric '" + metric + "' at " + num(sweep_value));
}

std::vector<std::string> ResultTable::metrics() const {
  std::vector<std::string> out;
  for (const auto& r : rows)
    if (std::find(out.begin(), out.end(), r.metric) == out.end()) out.push_back(r.metric);
  return out;
}

std::string format_csv(const ResultTable& table) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : table.rows) {
    out += r.sweep_name + "," + num(r.sweep_value) + "," + r.metric + "," + num(r.mean) + "," + num(r.stderr_) +
           "," + std::to_string(r.trials) + "," + std::to_string(r.seed) + "\n";
  }
  return out;
}

ResultTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("csv: header must be '" + std::string(kCsvHeader) + "'");
  ResultTable table;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 7) throw std::invalid_argument("csv line " + std::to_string(n) + ": expected 7 columns");
    table.rows.push_back({f[0], parse_double(f[1], n, "sweep_value"), f[2], parse_double(f[3], n, "mean"),
                          parse_double(f[4], n, "stderr"), parse_uint<std::size_t>(f[5], n, "trials"),
                          parse_uint<std::uint64_t>(f[6], n, "seed")});
  }
  return table;
}

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << format_csv(table);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

ResultTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace isac::experiments
