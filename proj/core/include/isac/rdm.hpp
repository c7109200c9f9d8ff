#pragma once

#include <cstddef>
#include <utility>

#include "isac/types.hpp"

namespace isac {

enum class RdmKind { ratio, ccc };
enum class RdmOrigin { cos, vcp };

// Range-Doppler map; row k is the Doppler bin, column l the delay bin, both
// cyclic. `stride` is the spacing in samples between consecutive symbols or
// sub-blocks (M+Q for COS, M~-Q_bar for VCP) and fixes the Doppler scale.
struct Rdm {
  CMatrix values;
  std::size_t stride = 0;
  double ts = 0.0;
  RdmKind kind = RdmKind::ratio;
  RdmOrigin origin = RdmOrigin::cos;

  std::size_t doppler_bins() const noexcept { return values.rows(); }
  std::size_t delay_bins() const noexcept { return values.cols(); }

  double delay_resolution() const noexcept { return ts; }
  double doppler_resolution() const noexcept {
    return 1.0 / (static_cast<double>(stride) * static_cast<double>(doppler_bins()) * ts);
  }

  // Doppler bin mapped to (-K/2, K/2].
  long long signed_doppler(std::size_t k) const noexcept;

  // Nearest grid bin of a target with fractional delay l_p (samples) and
  // normalized Doppler nu*Ts, wrapped into range.
  std::pair<std::size_t, std::size_t> nearest_bin(double delay_samples, double doppler_norm) const;
};

// V_k[l] = sum_n sum_m Y_n[m] F_M(-ml) F_N(nk): inverse DFT along each row,
// forward DFT along each column. Y has one row per symbol / sub-block.
CMatrix range_doppler_transform(CMatrix y);

}  // namespace isac
