#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace isac::experiments {

// One row of the canonical result schema consumed by the plotting layer.
struct ResultRow {
  std::string sweep_name;
  double sweep_value = 0.0;
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;

  void add(ResultRow row);
  // Rows whose metric matches, in insertion order.
  std::vector<ResultRow> select(const std::string& metric) const;
  const ResultRow& at(const std::string& metric, double sweep_value) const;
  std::vector<std::string> metrics() const;
};

inline constexpr const char* kCsvHeader = "sweep_name,sweep_value,metric,mean,stderr,trials,seed";

std::string format_csv(const ResultTable& table);
ResultTable parse_csv(const std::string& text);

void emit_csv(const ResultTable& table, const std::filesystem::path& path);
ResultTable read_csv(const std::filesystem::path& path);

}  // namespace isac::experiments
