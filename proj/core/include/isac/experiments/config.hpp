#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "isac/analysis.hpp"
#include "isac/channel.hpp"
#include "isac/detector.hpp"
#include "isac/rrc.hpp"
#include "isac/sensing_vcp.hpp"
#include "isac/waveform.hpp"

namespace isac::experiments {

struct ExperimentConfig {
  std::string preset;
  waveform::SystemParams system{.n = 16};
  // Empty means "follow-comm": only the classical per-symbol processing runs.
  std::vector<sensing_vcp::SegmentationParams> segmentation{{600, 128, 150}};
  bool cos = true;
  // Masked a-scaled division for the baseline ratio map; without it the
  // per-cell 1/S of Gaussian-like grids has no finite variance.
  bool cos_guard = true;
  channel::ScenarioSpec scenario;
  channel::NoiseSpec noise;
  std::vector<double> gamma0_db;  // empty: use noise.sigma_w2
  detector::CfarParams cfar;
  rrc::RrcConfig rrc;
  bool use_rrc = true;
  analysis::EmpiricalSinrOptions sinr;
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency; not serialized

  // Noise powers to evaluate: sigma_d2 / gamma0 per sweep point, or the fixed
  // noise spec when no sweep is given.
  std::vector<double> noise_powers() const;

  void validate() const;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parses the structured-text (JSON) form. Unknown fields are reported in
// `warnings`; missing required fields and type errors throw ConfigError
// naming the field, and syntax errors carry the line number.
ExperimentConfig parse_config(const std::string& text, std::vector<std::string>* warnings = nullptr);
ExperimentConfig load_config(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

std::string emit_config(const ExperimentConfig& cfg);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

}  // namespace isac::experiments
