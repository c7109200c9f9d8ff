#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "isac/experiments/csv.hpp"

namespace isac::experiments {

// N = 16 blocks out of the full 143.
inline constexpr double kDeskScale = 16.0 / 143.0;

struct PresetOptions {
  double scale = kDeskScale;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
};

// N = max(2, round(143 scale)), trials = max(1, round(450 scale)).
std::size_t scaled_blocks(double scale);
std::size_t scaled_trials(double scale);

const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);

struct PresetRun {
  std::string name;
  ResultTable combined;
  nlohmann::json manifest;

  // One table per metric, in first-appearance order.
  std::vector<std::pair<std::string, ResultTable>> curves() const;
};

// Throws std::invalid_argument for an unknown name or a non-positive scale.
PresetRun run_preset(const std::string& name, const PresetOptions& opts);

// Writes results.csv, one <metric>.csv per curve and manifest.json into dir.
void write_preset(const PresetRun& run, const std::filesystem::path& dir);

}  // namespace isac::experiments
