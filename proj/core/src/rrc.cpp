#include "isac/rrc.hpp"

#include <cmath>
#include <stdexcept>

namespace isac::rrc {
namespace {

double rrc_impulse(double t, double beta) {
  if (t == 0.0) return 1.0 - beta + 4.0 * beta / kPi;
  const double edge = 1.0 / (4.0 * beta);
  if (std::abs(std::abs(t) - edge) < 1e-12) {
    return beta / std::sqrt(2.0) *
           ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * beta)) +
            (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * beta)));
  }
  const double num = std::sin(kPi * t * (1.0 - beta)) + 4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
  const double den = kPi * t * (1.0 - std::pow(4.0 * beta * t, 2));
  return num / den;
}

void check(double rolloff, unsigned factor) {
  if (!(rolloff > 0.0 && rolloff <= 1.0)) throw std::invalid_argument("rrc: rolloff must be in (0, 1]");
  if (factor < 1) throw std::invalid_argument("rrc: factor must be >= 1");
}

}  // namespace

std::vector<double> rrc_taps(double rolloff, unsigned factor, std::size_t span) {
  check(rolloff, factor);
  if (span == 0) throw std::invalid_argument("rrc: span must be positive");
  const std::size_t len = span * factor + 1;
  const auto center = static_cast<long long>(len / 2);
  std::vector<double> h(len);
  double e = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double t = static_cast<double>(static_cast<long long>(i) - center) / factor;
    h[i] = rrc_impulse(t, rolloff);
    e += h[i] * h[i];
  }
  const double s = 1.0 / std::sqrt(e);
  for (auto& v : h) v *= s;
  return h;
}

RrcFilter::RrcFilter(const RrcConfig& cfg)
    : cfg_(cfg), taps_(rrc_taps(cfg.rolloff, cfg.factor, cfg.span)), delay_((taps_.size() - 1) / 2) {}

// y[n] = sum_k x[k] h[n + D - kL]
CVec RrcFilter::interpolate(std::span<const cplx> x) const {
  const long long L = cfg_.factor;
  const long long D = static_cast<long long>(delay_);
  const long long taps = static_cast<long long>(taps_.size());
  const long long nx = static_cast<long long>(x.size());
  CVec y(x.size() * cfg_.factor);
  for (long long n = 0; n < static_cast<long long>(y.size()); ++n) {
    // valid k: 0 <= n + D - kL < taps
    const long long k_hi = std::min(nx - 1, (n + D) / L);
    const long long k_lo = std::max(0LL, (n + D - taps + L) / L);
    cplx acc{};
    for (long long k = k_lo; k <= k_hi; ++k) {
      const long long idx = n + D - k * L;
      if (idx < taps) acc += x[static_cast<std::size_t>(k)] * taps_[static_cast<std::size_t>(idx)];
    }
    y[static_cast<std::size_t>(n)] = acc;
  }
  return y;
}

// z[i] = sum_n y[n] h[iL + D - n]
CVec RrcFilter::decimate(std::span<const cplx> y) const {
  const long long L = cfg_.factor;
  const long long D = static_cast<long long>(delay_);
  const long long taps = static_cast<long long>(taps_.size());
  const long long ny = static_cast<long long>(y.size());
  CVec z(y.size() / cfg_.factor);
  for (long long i = 0; i < static_cast<long long>(z.size()); ++i) {
    const long long centre = i * L + D;
    const long long n_lo = std::max(0LL, centre - taps + 1);
    const long long n_hi = std::min(ny - 1, centre);
    cplx acc{};
    for (long long n = n_lo; n <= n_hi; ++n)
      acc += y[static_cast<std::size_t>(n)] * taps_[static_cast<std::size_t>(centre - n)];
    z[static_cast<std::size_t>(i)] = acc;
  }
  return z;
}

waveform::TimeSignal rrc_filter(const waveform::TimeSignal& x, const RrcConfig& cfg, RrcMode mode) {
  const RrcFilter filter(cfg);
  waveform::TimeSignal out;
  if (mode == RrcMode::interpolate) {
    out.samples = filter.interpolate(x.samples);
    out.rate = x.rate * cfg.factor;
    out.oversample = x.oversample * cfg.factor;
  } else {
    if (x.oversample % cfg.factor != 0)
      throw std::invalid_argument("rrc_filter: oversample factor not divisible by L");
    out.samples = filter.decimate(x.samples);
    out.rate = x.rate / cfg.factor;
    out.oversample = x.oversample / cfg.factor;
  }
  return out;
}

}  // namespace isac::rrc
