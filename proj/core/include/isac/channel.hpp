#pragma once

#include <string>
#include <vector>

#include "isac/rng.hpp"
#include "isac/rrc.hpp"
#include "isac/waveform.hpp"

namespace isac::channel {

// One point scatterer. alpha is the realized block-constant coefficient
// including the e^{-j2 pi nu tau} phase term.
struct Target {
  double sigma_p2 = 1.0;  // mean scattering power (linear)
  double range = 0.0;     // m
  double velocity = 0.0;  // m/s, positive when approaching
  cplx alpha{1.0, 0.0};

  double tau() const noexcept { return 2.0 * range / kSpeedOfLight; }
  double nu(double fc) const noexcept { return 2.0 * velocity * fc / kSpeedOfLight; }
  // l_p = tau / Ts, off-grid allowed.
  double delay_samples(const waveform::SystemParams& p) const noexcept { return tau() * p.bandwidth; }
  // k~_p = nu Ts.
  double doppler_norm(const waveform::SystemParams& p) const noexcept { return nu(p.fc) * p.ts(); }
};

struct TargetSet {
  std::vector<Target> targets;

  double total_power() const noexcept;
  std::size_t size() const noexcept { return targets.size(); }
  bool empty() const noexcept { return targets.empty(); }
};

struct NoiseSpec {
  double sigma_w2 = 0.01;
};

struct TargetSpec {
  double sigma_p2 = 1.0;
  double range = 0.0;
  double velocity = 0.0;

  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

// "table2", "detection10" or "explicit". r_max / v_max bound the random draws;
// explicit targets are taken as given. With random_alpha false, alpha_p has
// magnitude sqrt(sigma_p2) and only the delay-Doppler phase term.
struct ScenarioSpec {
  std::string name = "table2";
  std::vector<TargetSpec> targets;
  double r_max = 10.0;
  double v_max = 139.0;
  bool random_alpha = true;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

std::vector<TargetSpec> scenario_targets(const ScenarioSpec& spec, Rng& rng);

TargetSet draw_targets(const ScenarioSpec& spec, const waveform::SystemParams& params, Rng& rng);

// Noiseless echo of the critically sampled block tx through the 4x RRC path:
// interpolate, per-target shift by round(4 l_p) and Doppler ramp, sum,
// decimate. Energy delayed past the block end is dropped.
CVec synthesize_echo(std::span<const cplx> tx, const TargetSet& targets,
                     const waveform::SystemParams& params, const rrc::RrcConfig& rrc = {});

// Critical-rate echo with delays rounded to whole samples and no pulse
// shaping; used where filter effects would blur exact statistics.
CVec synthesize_echo_critical(std::span<const cplx> tx, const TargetSet& targets,
                              const waveform::SystemParams& params);

void add_noise(std::span<cplx> x, double sigma_w2, Rng& rng);

waveform::TimeSignal generate_echo(const waveform::TimeSignal& tx, const TargetSet& targets,
                                   const NoiseSpec& noise, const waveform::SystemParams& params,
                                   Rng& rng, const rrc::RrcConfig& rrc = {});

}  // namespace isac::channel
