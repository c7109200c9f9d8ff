#include "isac/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "isac/detector.hpp"

namespace isac::analysis {

double b_penalty(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0, 1)");
  return 2.0 * std::log(2.0 * (1.0 - epsilon) / (std::exp(1.0) * std::sqrt(epsilon * (2.0 - epsilon))));
}

double a_critical(double sigma_d2, std::size_t total_samples) {
  if (total_samples < 2) throw std::invalid_argument("a_critical: I must be >= 2");
  if (!(sigma_d2 > 0.0)) throw std::invalid_argument("a_critical: sigma_d2 must be positive");
  const double i = static_cast<double>(total_samples);
  // ln(I/(I-1)) = -log1p(-1/I)
  return 1.0 / std::sqrt(sigma_d2 * -std::log1p(-1.0 / i));
}

std::size_t SinrInputs::n_tilde() const {
  if (m_tilde <= q_bar || total_samples < q_tilde + q_bar) throw std::invalid_argument("SinrInputs: no sub-blocks");
  return (total_samples - q_tilde - q_bar) / (m_tilde - q_bar);
}

double SinrInputs::epsilon_vcp() const {
  return epsilon ? *epsilon : 1.0 / static_cast<double>(m_tilde * n_tilde());
}

double SinrInputs::epsilon_cos() const { return epsilon ? *epsilon : 1.0 / static_cast<double>(m * n); }

namespace {

void check(const SinrInputs& in) {
  if (!(in.gamma0 > 0.0) || !(in.sigma_P2 > 0.0)) throw std::invalid_argument("gamma0 and sigma_P2 must be positive");
}

// Q~/M~ + (1 + Q~/M~)/(gamma0 sigma_P2)
double vcp_in_term(const SinrInputs& in) {
  const double r = static_cast<double>(in.q_tilde) / static_cast<double>(in.m_tilde);
  return r + (1.0 + r) / (in.gamma0 * in.sigma_P2);
}

}  // namespace

double sinr_ratio_vcp(const SinrInputs& in) {
  check(in);
  const double mn = static_cast<double>(in.m_tilde * in.n_tilde());
  return mn / (vcp_in_term(in) * b_penalty(in.epsilon_vcp()));
}

double sinr_ccc_vcp(const SinrInputs& in) {
  check(in);
  const double mn = static_cast<double>(in.m_tilde * in.n_tilde());
  return (mn + 1.0) / (vcp_in_term(in) + 1.0);
}

double sinr_cos(const SinrInputs& in, CosKind kind) {
  check(in);
  const double mn = static_cast<double>(in.m * in.n);
  const double g = in.gamma0 * in.sigma_P2;
  if (kind == CosKind::ratio) return mn * g / b_penalty(in.epsilon_cos());
  return (mn + 1.0) * g / (1.0 + g);
}

double to_db(double linear) noexcept { return 10.0 * std::log10(linear); }
double from_db(double db) noexcept { return std::pow(10.0, db / 10.0); }

double EmpiricalSinr::sinr() const noexcept {
  if (in_power <= 0.0) return std::numeric_limits<double>::infinity();
  return signal / in_power;
}

EmpiricalSinr measure_sinr(const Rdm& rdm, const std::vector<std::pair<std::size_t, std::size_t>>& bins,
                           const EmpiricalSinrOptions& opts) {
  if (bins.empty()) throw std::invalid_argument("empirical SINR needs at least one target");
  const CMatrix& v = rdm.values;
  const std::size_t nk = v.rows(), nl = v.cols();
  const auto excluded = [&](std::size_t k, std::size_t l) {
    for (const auto& [tk, tl] : bins)
      if (detector::cyclic_distance(k, tk, nk) <= opts.exclusion &&
          detector::cyclic_distance(l, tl, nl) <= opts.exclusion)
        return true;
    return false;
  };

  // Per-row floors: the background can vary along Doppler when sub-blocks
  // overlap, so debiasing uses the floor of each signal cell's own row.
  std::vector<double> row_sum(nk, 0.0);
  std::vector<std::size_t> row_count(nk, 0);
  for (std::size_t k = 0; k < nk; ++k)
    for (std::size_t l = 0; l < nl; ++l)
      if (!excluded(k, l)) {
        row_sum[k] += std::norm(v(k, l));
        ++row_count[k];
      }
  double in_sum = 0.0;
  std::size_t in_count = 0;
  for (std::size_t k = 0; k < nk; ++k) {
    in_sum += row_sum[k];
    in_count += row_count[k];
  }
  if (in_count == 0) throw std::invalid_argument("exclusion boxes cover the whole RDM");

  EmpiricalSinr out;
  out.in_power = in_sum / static_cast<double>(in_count);
  const auto floor_of = [&](std::size_t k) {
    return row_count[k] ? row_sum[k] / static_cast<double>(row_count[k]) : out.in_power;
  };
  const auto hk = static_cast<long long>(opts.halfwidth_k);
  const auto hl = static_cast<long long>(opts.halfwidth_l);
  for (const auto& [tk, tl] : bins) {
    double best = 0.0, best_floor = 0.0, total = 0.0, floors = 0.0;
    for (long long dk = -hk; dk <= hk; ++dk) {
      const std::size_t k = wrap_index(static_cast<long long>(tk) + dk, nk);
      for (long long dl = -hl; dl <= hl; ++dl) {
        const double p = std::norm(v(k, wrap_index(static_cast<long long>(tl) + dl, nl)));
        if (p > best) {
          best = p;
          best_floor = floor_of(k);
        }
        total += p;
        floors += floor_of(k);
      }
    }
    if (opts.sum)
      out.signal += opts.debias ? total - floors : total;
    else
      out.signal += opts.debias ? best - best_floor : best;
  }
  return out;
}

double empirical_sinr(const Rdm& rdm, const std::vector<std::pair<std::size_t, std::size_t>>& bins,
                      const EmpiricalSinrOptions& opts) {
  return measure_sinr(rdm, bins, opts).sinr();
}

std::size_t qtilde_from_range(double r_max, double ts) {
  if (r_max < 0.0 || !(ts > 0.0)) throw std::invalid_argument("qtilde_from_range: invalid arguments");
  const double q = std::ceil(2.0 * r_max / (kSpeedOfLight * ts) - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(q));
}

std::size_t mtilde_from_vmax(double v_max, double fc, double ts, std::size_t q_bar) {
  if (!(v_max > 0.0) || !(fc > 0.0) || !(ts > 0.0)) throw std::invalid_argument("mtilde_from_vmax: invalid arguments");
  const double nu = 2.0 * v_max * fc / kSpeedOfLight;
  return static_cast<std::size_t>(std::floor(1.0 / (2.0 * nu * ts))) + q_bar;
}

}  // namespace isac::analysis
