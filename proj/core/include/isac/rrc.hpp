#pragma once

#include <cstddef>
#include <vector>

#include "isac/waveform.hpp"

namespace isac::rrc {

struct RrcConfig {
  double rolloff = 0.2;
  std::size_t span = 32;  // filter length in symbol intervals
  unsigned factor = 4;    // interpolation / decimation ratio L

  friend bool operator==(const RrcConfig&, const RrcConfig&) = default;
};

enum class RrcMode { interpolate, decimate };

// span*L + 1 taps of the root raised cosine sampled at T/L, scaled to unit
// energy so that the matched TX/RX cascade is a unit-gain Nyquist pulse.
std::vector<double> rrc_taps(double rolloff, unsigned factor, std::size_t span);

// Polyphase RRC interpolator/decimator. Outputs are delay-compensated: the
// group delay of (taps-1)/2 high-rate samples is removed internally, so
// interpolate(x)[iL] lines up with x[i].
class RrcFilter {
 public:
  explicit RrcFilter(const RrcConfig& cfg);

  const RrcConfig& config() const noexcept { return cfg_; }
  const std::vector<double>& taps() const noexcept { return taps_; }
  std::size_t group_delay() const noexcept { return delay_; }

  // Zero-stuff by L and filter; output length x.size()*L.
  CVec interpolate(std::span<const cplx> x) const;
  // Filter and keep every L-th sample; output length y.size()/L.
  CVec decimate(std::span<const cplx> y) const;

 private:
  RrcConfig cfg_;
  std::vector<double> taps_;
  std::size_t delay_;
};

waveform::TimeSignal rrc_filter(const waveform::TimeSignal& x, const RrcConfig& cfg, RrcMode mode);

}  // namespace isac::rrc
