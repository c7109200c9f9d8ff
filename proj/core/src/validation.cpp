#include "isac/validation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "isac/analysis.hpp"
#include "isac/detector.hpp"
#include "isac/fft.hpp"
#include "isac/stats.hpp"

namespace isac::validation {

double StatCheck::error() const noexcept {
  const double d = std::abs(measured - theory);
  return relative ? d / std::abs(theory) : d;
}

bool StatCheck::pass() const noexcept { return informational || error() <= tolerance; }

bool StatReport::all_pass() const noexcept {
  for (const auto& c : checks)
    if (!c.pass()) return false;
  return true;
}

const StatCheck& StatReport::at(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no statistic named '" + name + "'");
}

channel::TargetSet ValidationSetup::targets() const {
  if (target_delays.size() != target_powers.size())
    throw std::invalid_argument("target_delays and target_powers differ in length");
  channel::TargetSet set;
  for (std::size_t p = 0; p < target_delays.size(); ++p) {
    channel::Target t;
    t.sigma_p2 = target_powers[p];
    t.range = target_delays[p] * kSpeedOfLight / (2.0 * params.bandwidth);
    t.alpha = cplx(std::sqrt(target_powers[p]), 0.0);
    set.targets.push_back(t);
  }
  return set;
}

double dirichlet_kernel(std::size_t lag, std::size_t q_tilde, std::size_t m_tilde) {
  const double d = static_cast<double>(lag), q = static_cast<double>(q_tilde), m = static_cast<double>(m_tilde);
  const double den = q * std::sin(kPi * d / m);
  if (std::abs(den) < 1e-15) return 1.0;
  return std::abs(std::sin(kPi * d * q / m) / den);
}

Decomposition decompose_subblock(std::span<const cplx> rx_noiseless, std::span<const cplx> tx,
                                 const channel::TargetSet& targets, const sensing_vcp::SegmentationParams& seg,
                                 const waveform::SystemParams& params) {
  if (rx_noiseless.size() != tx.size()) throw std::invalid_argument("decompose: rx and tx lengths differ");
  Decomposition out;
  out.received = sensing_vcp::add_vcp(sensing_vcp::segment(rx_noiseless, seg), rx_noiseless, seg).rows;
  const CMatrix ess = sensing_vcp::segment(tx, seg).rows;
  out.signal = CMatrix(ess.rows(), ess.cols());
  for (const auto& t : targets.targets) {
    const double l = t.delay_samples(params);
    if (std::abs(l - std::round(l)) > 1e-6 || t.doppler_norm(params) != 0.0)
      throw std::invalid_argument("decompose: only integer-delay, zero-Doppler targets are supported");
    const auto shift = static_cast<long long>(std::llround(l));
    for (std::size_t n = 0; n < ess.rows(); ++n)
      for (std::size_t j = 0; j < ess.cols(); ++j)
        out.signal(n, j) += t.alpha * ess(n, wrap_index(static_cast<long long>(j) - shift, ess.cols()));
  }
  out.z = out.received;
  auto zs = out.z.flat();
  auto ss = out.signal.flat();
  for (std::size_t i = 0; i < zs.size(); ++i) zs[i] -= ss[i];
  return out;
}

namespace {

struct Trial {
  CVec tx;
  CVec echo;   // noiseless, critical rate
  CVec noise;
};

Trial make_trial(const ValidationSetup& s, const channel::TargetSet& targets, std::size_t index) {
  const RngFactory rngs(s.seed);
  Rng data_rng = rngs.stream(Stream::data, index);
  Rng noise_rng = rngs.stream(Stream::noise, index);
  Trial t;
  t.tx = waveform::modulate(waveform::draw_data(s.params, data_rng), s.params).samples;
  t.echo = channel::synthesize_echo_critical(t.tx, targets, s.params);
  t.noise = CVec(t.tx.size());
  channel::add_noise(t.noise, s.sigma_w2, noise_rng);
  return t;
}

CMatrix vcp_dft(std::span<const cplx> x, const sensing_vcp::SegmentationParams& seg) {
  return sensing_vcp::subblock_dft(sensing_vcp::add_vcp(sensing_vcp::segment(x, seg), x, seg));
}

CMatrix dft_rows(CMatrix m) {
  fft::transform_rows(m, fft::Direction::forward);
  return m;
}

// Accumulators for consecutive-row correlation of a pooled N~ x M~ grid.
struct RowCorr {
  std::vector<cplx> cross;  // per column m: sum_n A_n[m] A*_{n+1}[m]
  double power = 0.0;       // sum |A|^2 over all cells
  std::size_t pairs = 0;    // row pairs per column
  std::size_t cells = 0;

  explicit RowCorr(std::size_t cols = 0) : cross(cols) {}

  void add(const CMatrix& a) {
    for (std::size_t n = 0; n + 1 < a.rows(); ++n)
      for (std::size_t m = 0; m < a.cols(); ++m) cross[m] += a(n, m) * std::conj(a(n + 1, m));
    pairs += a.rows() > 0 ? a.rows() - 1 : 0;
    power += energy(a.flat());
    cells += a.size();
  }

  void merge(const RowCorr& o) {
    for (std::size_t m = 0; m < cross.size(); ++m) cross[m] += o.cross[m];
    power += o.power;
    pairs += o.pairs;
    cells += o.cells;
  }

  double variance() const { return power / static_cast<double>(cells); }

  // mean over m of |E[A_n[m] A*_{n+1}[m]]| / scale
  double mean_abs_cov(double scale) const {
    double s = 0.0;
    for (const auto& c : cross) s += std::abs(c) / static_cast<double>(pairs);
    return s / static_cast<double>(cross.size()) / scale;
  }
};

struct LemmaTrial {
  RowCorr s, w;
  double z_power = 0.0;
  std::size_t z_cells = 0;
  std::vector<cplx> z_lag;
};

}  // namespace

StatReport validate_lemmas(const ValidationSetup& setup) {
  const auto& seg = setup.seg;
  const std::size_t total = setup.params.total_samples();
  seg.validate(total);
  if (setup.trials < 2) throw std::invalid_argument("validate_lemmas: need at least 2 trials");
  const channel::TargetSet targets = setup.targets();
  const std::size_t mt = seg.m_tilde;

  std::vector<LemmaTrial> results(setup.trials);
  parallel_for(setup.trials, setup.workers, [&](std::size_t i) {
    const Trial t = make_trial(setup, targets, i);
    LemmaTrial r{RowCorr(mt), RowCorr(mt), 0.0, 0, std::vector<cplx>(setup.kernel_lags.size())};
    r.s.add(sensing_vcp::reference_segments(t.tx, seg).freq);
    r.w.add(vcp_dft(t.noise, seg));
    if (!targets.empty()) {
      const CMatrix z = dft_rows(decompose_subblock(t.echo, t.tx, targets, seg, setup.params).z);
      r.z_power = energy(z.flat());
      r.z_cells = z.size();
      for (std::size_t d = 0; d < setup.kernel_lags.size(); ++d) {
        const std::size_t lag = setup.kernel_lags[d];
        for (std::size_t n = 0; n < z.rows(); ++n)
          for (std::size_t m = 0; m < mt; ++m) r.z_lag[d] += z(n, m) * std::conj(z(n, (m + lag) % mt));
      }
    }
    results[i] = std::move(r);
  });

  LemmaTrial acc{RowCorr(mt), RowCorr(mt), 0.0, 0, std::vector<cplx>(setup.kernel_lags.size())};
  for (const auto& r : results) {
    acc.s.merge(r.s);
    acc.w.merge(r.w);
    acc.z_power += r.z_power;
    acc.z_cells += r.z_cells;
    for (std::size_t d = 0; d < acc.z_lag.size(); ++d) acc.z_lag[d] += r.z_lag[d];
  }

  const double sd2 = setup.params.sigma_d2;
  const double qm = static_cast<double>(seg.q_tilde) / static_cast<double>(mt);
  const double sigma_W2 = (1.0 + qm) * setup.sigma_w2;
  const double sigma_P2 = targets.total_power();

  StatReport rep;
  rep.trials = setup.trials;
  rep.samples = acc.s.cells;
  rep.checks.push_back({"var_S", acc.s.variance(), sd2, setup.var_tol, true});
  rep.checks.push_back({"var_W", acc.w.variance(), sigma_W2, setup.var_tol, true});
  rep.checks.push_back({"corr_S", acc.s.mean_abs_cov(sd2), static_cast<double>(seg.q_bar) / static_cast<double>(mt),
                        setup.corr_tol, false});
  // Covariance of consecutive W rows relative to the per-sample noise power,
  // and the same normalized by the W variance (the correlation coefficient).
  rep.checks.push_back({"cov_W", acc.w.mean_abs_cov(setup.sigma_w2),
                        static_cast<double>(seg.q_tilde + seg.q_bar) / static_cast<double>(mt), setup.corr_tol,
                        false});
  rep.checks.push_back({"corr_W", acc.w.mean_abs_cov(sigma_W2),
                        static_cast<double>(seg.q_tilde + seg.q_bar) / static_cast<double>(mt + seg.q_tilde),
                        setup.corr_tol, false});
  if (!targets.empty()) {
    rep.checks.push_back({"var_Z", acc.z_power / static_cast<double>(acc.z_cells), qm * sd2 * sigma_P2,
                          setup.var_tol, true});
    for (std::size_t d = 0; d < setup.kernel_lags.size(); ++d) {
      const std::size_t lag = setup.kernel_lags[d];
      rep.checks.push_back({"corr_Z_lag" + std::to_string(lag), std::abs(acc.z_lag[d]) / acc.z_power,
                            dirichlet_kernel(lag, seg.q_tilde, mt), setup.corr_tol, false});
    }
  }
  return rep;
}

namespace {

struct PropTrial {
  stats::Moments ratio_re, ratio_im, ccc_re, ccc_im;
  double ratio_in = 0.0, ratio_total = 0.0, ccc_in = 0.0, ccc_total = 0.0;
  std::size_t cells = 0;
  std::vector<double> row_in;  // per Doppler row: sum |ratio IN|^2
  std::size_t row_cells = 0;
  double peak = 0.0;
  std::size_t masked = 0;
};

}  // namespace

StatReport validate_propositions(const ValidationSetup& setup) {
  const auto& seg = setup.seg;
  const auto& params = setup.params;
  const std::size_t total = params.total_samples();
  seg.validate(total);
  if (setup.trials < 2) throw std::invalid_argument("validate_propositions: need at least 2 trials");
  const channel::TargetSet targets = setup.targets();
  const double a = analysis::a_critical(params.sigma_d2, total);
  const std::size_t nt = seg.n_tilde(total);

  std::vector<PropTrial> results(setup.trials);
  parallel_for(setup.trials, setup.workers, [&](std::size_t i) {
    const Trial t = make_trial(setup, targets, i);
    CVec rx = t.echo;
    for (std::size_t j = 0; j < rx.size(); ++j) rx[j] += t.noise[j];

    const CMatrix s = sensing_vcp::reference_segments(t.tx, seg).freq;
    const CMatrix x = vcp_dft(rx, seg);
    CMatrix x_in = x;
    std::vector<std::pair<std::size_t, std::size_t>> bins;
    if (!targets.empty()) {
      const CMatrix sig = dft_rows(decompose_subblock(t.echo, t.tx, targets, seg, params).signal);
      auto xi = x_in.flat();
      auto sg = sig.flat();
      for (std::size_t j = 0; j < xi.size(); ++j) xi[j] -= sg[j];
    }

    PropTrial r;
    const Rdm ratio = sensing_vcp::rdm_ratio(x, s, a, seg, params.ts(), &r.masked);
    const Rdm ratio_in = sensing_vcp::rdm_ratio(x_in, s, a, seg, params.ts());
    const Rdm ccc = sensing_vcp::rdm_ccc(x, s, seg, params.ts());
    const Rdm ccc_in = sensing_vcp::rdm_ccc(x_in, s, seg, params.ts());
    for (const auto& tg : targets.targets) bins.push_back(ratio.nearest_bin(tg.delay_samples(params), 0.0));

    r.row_in.assign(ratio.doppler_bins(), 0.0);
    for (std::size_t k = 0; k < ratio.doppler_bins(); ++k) {
      for (std::size_t l = 0; l < ratio.delay_bins(); ++l) {
        bool excluded = false;
        for (const auto& [tk, tl] : bins)
          excluded = excluded || (detector::cyclic_distance(k, tk, nt) <= setup.exclusion &&
                                  detector::cyclic_distance(l, tl, seg.m_tilde) <= setup.exclusion);
        if (excluded) continue;
        const cplx vr = ratio.values(k, l), vc = ccc.values(k, l);
        r.ratio_re.add(vr.real());
        r.ratio_im.add(vr.imag());
        r.ccc_re.add(vc.real());
        r.ccc_im.add(vc.imag());
        r.ratio_total += std::norm(vr);
        r.ccc_total += std::norm(vc);
        r.ratio_in += std::norm(ratio_in.values(k, l));
        r.ccc_in += std::norm(ccc_in.values(k, l));
        ++r.cells;
      }
      for (std::size_t l = 0; l < ratio.delay_bins(); ++l) r.row_in[k] += std::norm(ratio_in.values(k, l));
    }
    r.row_cells = ratio.delay_bins();
    if (!bins.empty()) r.peak = (ccc.values(bins[0].first, bins[0].second) / targets.targets[0].alpha).real();
    results[i] = std::move(r);
  });

  PropTrial acc;
  acc.row_in.assign(nt, 0.0);
  stats::Moments peak;
  for (const auto& r : results) {
    acc.ratio_re.merge(r.ratio_re);
    acc.ratio_im.merge(r.ratio_im);
    acc.ccc_re.merge(r.ccc_re);
    acc.ccc_im.merge(r.ccc_im);
    acc.ratio_in += r.ratio_in;
    acc.ratio_total += r.ratio_total;
    acc.ccc_in += r.ccc_in;
    acc.ccc_total += r.ccc_total;
    acc.cells += r.cells;
    acc.masked += r.masked;
    for (std::size_t k = 0; k < nt; ++k) acc.row_in[k] += r.row_in[k];
    acc.row_cells += r.row_cells;
    peak.add(r.peak);
  }

  const double sd2 = params.sigma_d2;
  const double mt = static_cast<double>(seg.m_tilde);
  const double qm = static_cast<double>(seg.q_tilde) / mt;
  const double sigma_P2 = targets.total_power();
  const double sigma_Z2 = qm * sd2 * sigma_P2;
  const double sigma_W2 = (1.0 + qm) * setup.sigma_w2;
  const double b = analysis::b_penalty(1.0 / (mt * static_cast<double>(nt)));
  const double ratio_theory = (sigma_Z2 + sigma_W2) * b / (a * a * sd2);
  const double ccc_theory = sd2 * (sigma_Z2 + sigma_W2);
  const double cells = static_cast<double>(acc.cells);

  StatReport rep;
  rep.trials = setup.trials;
  rep.samples = acc.cells;
  rep.checks.push_back({"kurt_ratio_re", acc.ratio_re.excess_kurtosis(), 0.0, setup.kurt_tol, false});
  rep.checks.push_back({"kurt_ratio_im", acc.ratio_im.excess_kurtosis(), 0.0, setup.kurt_tol, false});
  rep.checks.push_back({"kurt_ccc_re", acc.ccc_re.excess_kurtosis(), 0.0, setup.kurt_tol, false});
  rep.checks.push_back({"kurt_ccc_im", acc.ccc_im.excess_kurtosis(), 0.0, setup.kurt_tol, false});
  rep.checks.push_back({"var_ratio_in", acc.ratio_in / cells, ratio_theory, setup.var_tol, true});
  rep.checks.push_back({"var_ratio_total", acc.ratio_total / cells, ratio_theory, setup.var_tol, true});
  rep.checks.push_back({"var_ccc_in", acc.ccc_in / cells, ccc_theory, setup.var_tol, true});
  // The CCC map also carries the data self-noise alpha(|S|^2 - sigma_d2),
  // which adds sigma_P2 sigma_d^4 per cell.
  rep.checks.push_back({"var_ccc_total", acc.ccc_total / cells, ccc_theory + sigma_P2 * sd2 * sd2, setup.var_tol,
                        true});
  if (!targets.empty())
    rep.checks.push_back({"ccc_peak_mean", peak.mean(), sd2 * std::sqrt(mt * static_cast<double>(nt)),
                          setup.peak_tol, true});

  double row_min = std::numeric_limits<double>::infinity(), row_max = 0.0;
  for (double v : acc.row_in) {
    row_min = std::min(row_min, v);
    row_max = std::max(row_max, v);
  }
  rep.checks.push_back({"doppler_flatness_db", analysis::to_db(row_max / row_min), 0.0, 0.0, false, true});
  rep.checks.push_back({"masked_fraction", static_cast<double>(acc.masked) /
                                               (static_cast<double>(setup.trials) * mt * static_cast<double>(nt)),
                        1.0 / static_cast<double>(total), 0.0, true, true});
  return rep;
}

}  // namespace isac::validation
