#include "isac/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace isac::channel {
namespace {

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

void check_delay(long long shift, std::size_t len) {
  if (shift < 0 || static_cast<std::size_t>(shift) >= len)
    throw std::invalid_argument("target delay of " + std::to_string(shift) +
                                " samples exceeds block length " + std::to_string(len));
}

}  // namespace

double TargetSet::total_power() const noexcept {
  double s = 0.0;
  for (const auto& t : targets) s += t.sigma_p2;
  return s;
}

std::vector<TargetSpec> scenario_targets(const ScenarioSpec& spec, Rng& rng) {
  std::vector<TargetSpec> out;
  if (spec.name == "table2") {
    for (double db : {0.0, -10.0, -20.0})
      out.push_back({db_to_lin(db), uniform(rng, 0.0, spec.r_max), uniform(rng, -spec.v_max, spec.v_max)});
  } else if (spec.name == "detection10") {
    for (int p = 0; p < 10; ++p) {
      const double db = p == 0 ? 0.0 : p <= 4 ? -20.0 : -30.0;
      const double r = spec.r_max * p / 9.0;
      out.push_back({db_to_lin(db), r, uniform(rng, -spec.v_max, spec.v_max)});
    }
  } else if (spec.name == "explicit") {
    out = spec.targets;
  } else {
    throw std::invalid_argument("unknown scenario '" + spec.name + "'");
  }
  return out;
}

TargetSet draw_targets(const ScenarioSpec& spec, const waveform::SystemParams& params, Rng& rng) {
  TargetSet set;
  for (const auto& ts : scenario_targets(spec, rng)) {
    if (ts.range < 0.0) throw std::invalid_argument("target range must be >= 0");
    if (!(ts.sigma_p2 > 0.0)) throw std::invalid_argument("target power must be positive");
    Target t{ts.sigma_p2, ts.range, ts.velocity, {}};
    const cplx base = spec.random_alpha ? complex_normal(rng, ts.sigma_p2) : cplx(std::sqrt(ts.sigma_p2), 0.0);
    t.alpha = base * std::polar(1.0, -2.0 * kPi * t.nu(params.fc) * t.tau());
    set.targets.push_back(t);
  }
  return set;
}

CVec synthesize_echo(std::span<const cplx> tx, const TargetSet& targets,
                     const waveform::SystemParams& params, const rrc::RrcConfig& rrc) {
  const rrc::RrcFilter filter(rrc);
  const CVec high = filter.interpolate(tx);
  const double l_rate = static_cast<double>(rrc.factor);
  CVec acc(high.size());
  for (const auto& t : targets.targets) {
    const long long shift = std::llround(l_rate * t.delay_samples(params));
    check_delay(shift, high.size());
    const double step = 2.0 * kPi * t.doppler_norm(params) / l_rate;
    for (std::size_t i = static_cast<std::size_t>(shift); i < high.size(); ++i)
      acc[i] += t.alpha * std::polar(1.0, step * static_cast<double>(i)) * high[i - shift];
  }
  return filter.decimate(acc);
}

CVec synthesize_echo_critical(std::span<const cplx> tx, const TargetSet& targets,
                              const waveform::SystemParams& params) {
  CVec acc(tx.size());
  for (const auto& t : targets.targets) {
    const long long shift = std::llround(t.delay_samples(params));
    check_delay(shift, tx.size());
    const double step = 2.0 * kPi * t.doppler_norm(params);
    for (std::size_t i = static_cast<std::size_t>(shift); i < tx.size(); ++i)
      acc[i] += t.alpha * std::polar(1.0, step * static_cast<double>(i)) * tx[i - shift];
  }
  return acc;
}

void add_noise(std::span<cplx> x, double sigma_w2, Rng& rng) {
  if (sigma_w2 < 0.0) throw std::invalid_argument("sigma_w2 must be >= 0");
  if (sigma_w2 == 0.0) return;
  for (auto& v : x) v += complex_normal(rng, sigma_w2);
}

waveform::TimeSignal generate_echo(const waveform::TimeSignal& tx, const TargetSet& targets,
                                   const NoiseSpec& noise, const waveform::SystemParams& params,
                                   Rng& rng, const rrc::RrcConfig& rrc) {
  waveform::TimeSignal out{synthesize_echo(tx.samples, targets, params, rrc), tx.rate, tx.oversample};
  add_noise(out.samples, noise.sigma_w2, rng);
  return out;
}

}  // namespace isac::channel
