#include "isac/experiments/rdm_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace isac::experiments {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("rdm line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string format_rdm(const Rdm& rdm) {
  std::string out;
  out += "# kind=" + std::string(rdm.kind == RdmKind::ratio ? "ratio" : "ccc") + "\n";
  out += "# origin=" + std::string(rdm.origin == RdmOrigin::cos ? "cos" : "vcp") + "\n";
  out += "# stride=" + std::to_string(rdm.stride) + "\n";
  out += "# ts=" + num(rdm.ts) + "\n";
  out += "# rows=" + std::to_string(rdm.doppler_bins()) + "\n";
  out += "# cols=" + std::to_string(rdm.delay_bins()) + "\n";
  out += "k,l,re,im\n";
  for (std::size_t k = 0; k < rdm.doppler_bins(); ++k)
    for (std::size_t l = 0; l < rdm.delay_bins(); ++l) {
      const cplx v = rdm.values(k, l);
      out += std::to_string(k) + "," + std::to_string(l) + "," + num(v.real()) + "," + num(v.imag()) + "\n";
    }
  return out;
}

Rdm parse_rdm(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> meta;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.rfind("# ", 0) != 0) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(n, "metadata line without '='");
    meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
  }
  if (line != "k,l,re,im") fail(n, "expected header 'k,l,re,im'");
  for (const char* key : {"kind", "origin", "stride", "ts", "rows", "cols"})
    if (!meta.count(key)) fail(n, std::string("missing metadata '") + key + "'");

  Rdm rdm;
  rdm.kind = meta["kind"] == "ratio" ? RdmKind::ratio : RdmKind::ccc;
  rdm.origin = meta["origin"] == "cos" ? RdmOrigin::cos : RdmOrigin::vcp;
  rdm.stride = std::stoul(meta["stride"]);
  rdm.ts = std::stod(meta["ts"]);
  const std::size_t rows = std::stoul(meta["rows"]), cols = std::stoul(meta["cols"]);
  rdm.values = CMatrix(rows, cols);
  std::size_t cells = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::size_t k = 0, l = 0;
    double re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%zu,%zu,%lf,%lf", &k, &l, &re, &im) != 4) fail(n, "expected k,l,re,im");
    if (k >= rows || l >= cols) fail(n, "cell index out of range");
    rdm.values(k, l) = {re, im};
    ++cells;
  }
  if (cells != rows * cols) fail(n, "expected " + std::to_string(rows * cols) + " cells, read " + std::to_string(cells));
  return rdm;
}

void write_rdm(const Rdm& rdm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << format_rdm(rdm);
}

Rdm read_rdm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_rdm(ss.str());
}

std::string format_detections(const std::vector<detector::Detection>& dets) {
  std::string out = "k,l,power,threshold,tau_hat,nu_hat\n";
  for (const auto& d : dets)
    out += std::to_string(d.k) + "," + std::to_string(d.l) + "," + num(d.power) + "," + num(d.threshold) + "," +
           num(d.tau_hat) + "," + num(d.nu_hat) + "\n";
  return out;
}

}  // namespace isac::experiments
