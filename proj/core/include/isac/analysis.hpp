#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "isac/rdm.hpp"

namespace isac::analysis {

// Heavy-tail penalty of the masked Gaussian ratio:
// b(eps) = 2 ln(2(1-eps) / (e sqrt(eps(2-eps)))).
double b_penalty(double epsilon);

// Scaling for which P(|a S| < 1) = 1/I when S ~ CN(0, sigma_d2).
double a_critical(double sigma_d2, std::size_t total_samples);

struct SinrInputs {
  double gamma0 = 1.0;    // sigma_d2 / sigma_w2
  double sigma_P2 = 1.0;  // total target power
  std::size_t total_samples = 91520;  // I
  // Proposed framework.
  std::size_t m_tilde = 512;
  std::size_t q_tilde = 128;
  std::size_t q_bar = 150;
  // Classical baseline.
  std::size_t m = 512;
  std::size_t n = 143;
  std::size_t q = 128;
  std::optional<double> epsilon;  // default 1/(M~ N~) or 1/(MN)

  std::size_t n_tilde() const;
  double epsilon_vcp() const;
  double epsilon_cos() const;
};

double sinr_ratio_vcp(const SinrInputs& in);
double sinr_ccc_vcp(const SinrInputs& in);

enum class CosKind { ratio, ccc };
double sinr_cos(const SinrInputs& in, CosKind kind);

double to_db(double linear) noexcept;
double from_db(double db) noexcept;

// Defaults reproduce the plain estimator: |V|^2 at the nearest bin of each
// target over the mean |V|^2 outside +-exclusion boxes.
struct EmpiricalSinrOptions {
  std::size_t exclusion = 3;     // IN box half-width around every target
  std::size_t halfwidth_k = 0;   // signal box half-width along Doppler
  std::size_t halfwidth_l = 0;   // signal box half-width along delay
  bool sum = false;              // sum the signal box instead of taking its max
  bool debias = false;           // subtract each signal cell's Doppler-row IN floor

  friend bool operator==(const EmpiricalSinrOptions&, const EmpiricalSinrOptions&) = default;
};

struct EmpiricalSinr {
  double signal = 0.0;  // sum over targets of |V|^2
  double in_power = 0.0;
  double sinr() const noexcept;
};

// Signal at each target's nearest bin, IN as the mean |V|^2 outside the
// exclusion boxes. Throws if the boxes cover the whole map.
EmpiricalSinr measure_sinr(const Rdm& rdm, const std::vector<std::pair<std::size_t, std::size_t>>& bins,
                           const EmpiricalSinrOptions& opts = {});

double empirical_sinr(const Rdm& rdm, const std::vector<std::pair<std::size_t, std::size_t>>& bins,
                      const EmpiricalSinrOptions& opts = {});

// Q~ = ceil(2 r_max / (c Ts)), at least 1.
std::size_t qtilde_from_range(double r_max, double ts);
// Largest M~ satisfying M~ - Q_bar <= 1/(2 nu_max Ts) with nu_max = 2 v_max fc / c.
std::size_t mtilde_from_vmax(double v_max, double fc, double ts, std::size_t q_bar);

}  // namespace isac::analysis
