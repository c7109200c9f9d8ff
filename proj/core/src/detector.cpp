#include "isac/detector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace isac::detector {
namespace {

// Box sums of |V|^2 over a cyclic window, via prefix sums of the map padded
// by wk rows and wl columns on every side.
class CyclicBoxSum {
 public:
  CyclicBoxSum(const CMatrix& v, std::size_t wk, std::size_t wl)
      : rows_(v.rows()), cols_(v.cols()), wk_(wk), wl_(wl), pc_(cols_ + 2 * wl + 1),
        sum_((rows_ + 2 * wk + 1) * pc_, 0.0) {
    const std::size_t pr = rows_ + 2 * wk;
    for (std::size_t r = 0; r < pr; ++r) {
      const std::size_t src_r = wrap_index(static_cast<long long>(r) - static_cast<long long>(wk), rows_);
      double run = 0.0;
      for (std::size_t c = 0; c + 1 < pc_; ++c) {
        const std::size_t src_c = wrap_index(static_cast<long long>(c) - static_cast<long long>(wl), cols_);
        run += std::norm(v(src_r, src_c));
        sum_[(r + 1) * pc_ + c + 1] = sum_[r * pc_ + c + 1] + run;
      }
    }
  }

  // Sum over rows k-hk..k+hk, cols l-hl..l+hl with hk <= wk, hl <= wl.
  double box(std::size_t k, std::size_t l, std::size_t hk, std::size_t hl) const noexcept {
    const std::size_t r0 = k + wk_ - hk, r1 = k + wk_ + hk + 1;
    const std::size_t c0 = l + wl_ - hl, c1 = l + wl_ + hl + 1;
    return sum_[r1 * pc_ + c1] - sum_[r0 * pc_ + c1] - sum_[r1 * pc_ + c0] + sum_[r0 * pc_ + c0];
  }

 private:
  std::size_t rows_, cols_, wk_, wl_, pc_;
  std::vector<double> sum_;
};

void check_window(const CMatrix& v, const CfarParams& p) {
  p.validate();
  const std::size_t wk = 2 * (p.nr_k + p.ng_k) + 1;
  const std::size_t wl = 2 * (p.nr_l + p.ng_l) + 1;
  if (!window_fits(v.rows(), v.cols(), p))
    throw std::invalid_argument("CFAR window " + std::to_string(wk) + "x" + std::to_string(wl) +
                                " exceeds RDM " + std::to_string(v.rows()) + "x" + std::to_string(v.cols()));
}

template <typename OnHit>
void scan(const CMatrix& v, const CfarParams& p, OnHit&& on_hit) {
  check_window(v, p);
  const std::size_t wk = p.nr_k + p.ng_k, wl = p.nr_l + p.ng_l;
  const CyclicBoxSum sums(v, wk, wl);
  const double omega = static_cast<double>(reference_cell_count(p));
  const double beta = threshold_factor(p);
  for (std::size_t k = 0; k < v.rows(); ++k) {
    for (std::size_t l = 0; l < v.cols(); ++l) {
      const double ring = sums.box(k, l, wk, wl) - sums.box(k, l, p.ng_k, p.ng_l);
      const double threshold = beta * std::max(ring, 0.0) / omega;
      const double power = std::norm(v(k, l));
      if (power >= threshold) on_hit(k, l, power, threshold);
    }
  }
}

}  // namespace

void CfarParams::validate() const {
  if (!(pf > 0.0 && pf < 1.0)) throw std::invalid_argument("pf must be in (0, 1)");
  if (reference_cell_count(*this) == 0) throw std::invalid_argument("CFAR reference window is empty");
}

std::size_t reference_cell_count(const CfarParams& p) {
  const std::size_t outer = (2 * (p.nr_k + p.ng_k) + 1) * (2 * (p.nr_l + p.ng_l) + 1);
  const std::size_t inner = (2 * p.ng_k + 1) * (2 * p.ng_l + 1);
  return outer - inner;
}

double threshold_factor(const CfarParams& p) {
  const double omega = static_cast<double>(reference_cell_count(p));
  return omega * (std::pow(p.pf, -1.0 / omega) - 1.0);
}

bool window_fits(std::size_t doppler_bins, std::size_t delay_bins, const CfarParams& p) noexcept {
  return 2 * (p.nr_k + p.ng_k) + 1 <= doppler_bins && 2 * (p.nr_l + p.ng_l) + 1 <= delay_bins;
}

std::vector<Detection> cfar_detect(const Rdm& rdm, const CfarParams& params) {
  std::vector<Detection> out;
  scan(rdm.values, params, [&](std::size_t k, std::size_t l, double power, double threshold) {
    Detection d{k, l, power, threshold, 0.0, 0.0};
    d.tau_hat = static_cast<double>(l) * rdm.delay_resolution();
    d.nu_hat = static_cast<double>(rdm.signed_doppler(k)) * rdm.doppler_resolution();
    out.push_back(d);
  });
  return out;
}

std::size_t cfar_count(const CMatrix& values, const CfarParams& params) {
  std::size_t hits = 0;
  scan(values, params, [&](std::size_t, std::size_t, double, double) { ++hits; });
  return hits;
}

std::size_t cyclic_distance(std::size_t a, std::size_t b, std::size_t n) noexcept {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<std::pair<std::size_t, std::size_t>>& truth,
                             std::size_t doppler_bins, std::size_t delay_bins, std::size_t tol_k,
                             std::size_t tol_l) {
  MatchResult res{truth.size(), 0, 0};
  const auto near = [&](const Detection& d, const std::pair<std::size_t, std::size_t>& t) {
    return cyclic_distance(d.k, t.first, doppler_bins) <= tol_k &&
           cyclic_distance(d.l, t.second, delay_bins) <= tol_l;
  };
  for (const auto& t : truth) {
    for (const auto& d : dets) {
      if (near(d, t)) {
        ++res.detected;
        break;
      }
    }
  }
  for (const auto& d : dets) {
    bool matched = false;
    for (const auto& t : truth) matched = matched || near(d, t);
    if (!matched) ++res.false_alarms;
  }
  return res;
}

}  // namespace isac::detector
