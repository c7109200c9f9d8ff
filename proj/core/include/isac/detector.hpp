#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "isac/rdm.hpp"

namespace isac::detector {

// 2-D cell-averaging CFAR window. Half-widths along Doppler (k) and delay (l).
struct CfarParams {
  double pf = 1e-3;
  std::size_t ng_k = 3;
  std::size_t ng_l = 3;
  std::size_t nr_k = 2;
  std::size_t nr_l = 5;

  void validate() const;
  friend bool operator==(const CfarParams&, const CfarParams&) = default;
};

// |Omega| = (2(nr_k+ng_k)+1)(2(nr_l+ng_l)+1) - (2ng_k+1)(2ng_l+1)
std::size_t reference_cell_count(const CfarParams& p);

// beta = |Omega| (pf^{-1/|Omega|} - 1)
double threshold_factor(const CfarParams& p);

// The full window must fit inside the map, or cells would see themselves in
// their own reference ring.
bool window_fits(std::size_t doppler_bins, std::size_t delay_bins, const CfarParams& p) noexcept;

struct Detection {
  std::size_t k = 0;
  std::size_t l = 0;
  double power = 0.0;
  double threshold = 0.0;
  double tau_hat = 0.0;  // s
  double nu_hat = 0.0;   // Hz, from the signed Doppler bin
};

// Every cell whose power reaches beta times the mean of its cyclic reference
// ring is reported; no clustering.
std::vector<Detection> cfar_detect(const Rdm& rdm, const CfarParams& params);

// Per-cell CFAR decision without building Detection records.
std::size_t cfar_count(const CMatrix& values, const CfarParams& params);

struct MatchResult {
  std::size_t targets = 0;
  std::size_t detected = 0;
  std::size_t false_alarms = 0;

  double pd() const noexcept {
    return targets == 0 ? 0.0 : static_cast<double>(detected) / static_cast<double>(targets);
  }
};

// A truth bin (k, l) is detected when some detection lies within the cyclic
// box |dk| <= tol_k, |dl| <= tol_l; detections near no truth bin are false
// alarms.
MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<std::pair<std::size_t, std::size_t>>& truth,
                             std::size_t doppler_bins, std::size_t delay_bins, std::size_t tol_k = 3,
                             std::size_t tol_l = 3);

std::size_t cyclic_distance(std::size_t a, std::size_t b, std::size_t n) noexcept;

}  // namespace isac::detector
