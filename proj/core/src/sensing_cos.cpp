#include "isac/sensing_cos.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace isac::sensing_cos {
namespace {

void check_pair(const CMatrix& x, const CMatrix& s) {
  if (x.rows() != s.rows() || x.cols() != s.cols())
    throw std::invalid_argument("COS: X and S dimensions differ");
}

Rdm make(CMatrix y, const waveform::SystemParams& params, RdmKind kind) {
  return {range_doppler_transform(std::move(y)), params.m + params.q, params.ts(), kind, RdmOrigin::cos};
}

}  // namespace

waveform::FreqTimeGrid cos_demod(const waveform::TimeSignal& rx, const waveform::SystemParams& params) {
  if (!params.per_symbol_cp()) throw std::invalid_argument("cos_demod: waveform has no per-symbol CP");
  const std::size_t expected = params.n * (params.m + params.q);
  if (rx.samples.size() != expected)
    throw std::invalid_argument("cos_demod: received " + std::to_string(rx.samples.size()) +
                                " samples, expected " + std::to_string(expected));
  return waveform::time_to_ft(waveform::strip_cp(rx.samples, params));
}

Rdm rdm_ratio(const waveform::FreqTimeGrid& x, const waveform::FreqTimeGrid& s,
              const waveform::SystemParams& params) {
  check_pair(x.values, s.values);
  CMatrix y(x.values.rows(), x.values.cols());
  auto xs = x.values.flat();
  auto ss = s.values.flat();
  auto ys = y.flat();
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (ss[i] == cplx{}) throw std::invalid_argument("COS ratio: S has a zero entry");
    ys[i] = xs[i] / ss[i];
  }
  return make(std::move(y), params, RdmKind::ratio);
}

Rdm rdm_ratio_guarded(const waveform::FreqTimeGrid& x, const waveform::FreqTimeGrid& s, double a,
                      const waveform::SystemParams& params, std::size_t* masked) {
  if (!(a > 0.0)) throw std::invalid_argument("ratio scaling a must be positive");
  check_pair(x.values, s.values);
  CMatrix y(x.values.rows(), x.values.cols());
  auto xs = x.values.flat();
  auto ss = s.values.flat();
  auto ys = y.flat();
  const double thr = 1.0 / (a * a);
  std::size_t count = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (std::norm(ss[i]) < thr) {
      ++count;
      continue;
    }
    ys[i] = xs[i] / (a * ss[i]);
  }
  if (masked) *masked = count;
  return make(std::move(y), params, RdmKind::ratio);
}

Rdm rdm_ccc(const waveform::FreqTimeGrid& x, const waveform::FreqTimeGrid& s,
            const waveform::SystemParams& params) {
  check_pair(x.values, s.values);
  CMatrix y(x.values.rows(), x.values.cols());
  auto xs = x.values.flat();
  auto ss = s.values.flat();
  auto ys = y.flat();
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = xs[i] * std::conj(ss[i]);
  return make(std::move(y), params, RdmKind::ccc);
}

cplx sinc_kernel(std::size_t x, double y) {
  if (x == 0) throw std::invalid_argument("sinc_kernel: x must be >= 1");
  const double xd = static_cast<double>(x);
  const double den = std::sin(kPi * y / xd);
  const cplx phase = std::polar(1.0, kPi * (xd - 1.0) * y / xd);
  if (std::abs(den) < 1e-12) {
    // limit of sin(pi y)/sin(pi y/x) at y = jx is x (-1)^{j(x-1)}
    const double j = std::round(y / xd);
    const double sign = std::fmod(std::abs(j * (xd - 1.0)), 2.0) == 0.0 ? 1.0 : -1.0;
    return sign * std::sqrt(xd) * phase;
  }
  return std::sin(kPi * y) / den / std::sqrt(xd) * phase;
}

}  // namespace isac::sensing_cos
