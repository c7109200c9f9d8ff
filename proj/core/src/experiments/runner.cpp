#include "isac/experiments/runner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "isac/parallel.hpp"
#include "isac/sensing_cos.hpp"

namespace isac::experiments {

TrialData prepare_trial(const ExperimentConfig& cfg, std::size_t trial) {
  const RngFactory rngs(cfg.seed);
  Rng data_rng = rngs.stream(Stream::data, trial);
  Rng target_rng = rngs.stream(Stream::targets, trial);
  const auto grid = waveform::draw_data(cfg.system, data_rng);
  TrialData t;
  t.tx = waveform::modulate(grid, cfg.system).samples;
  t.tx_ft = waveform::map_dd_to_ft(grid, cfg.system);
  t.targets = channel::draw_targets(cfg.scenario, cfg.system, target_rng);
  t.echo = cfg.use_rrc ? channel::synthesize_echo(t.tx, t.targets, cfg.system, cfg.rrc)
                       : channel::synthesize_echo_critical(t.tx, t.targets, cfg.system);
  return t;
}

std::vector<SensedPair> sense_all(const ExperimentConfig& cfg, const TrialData& trial, std::span<const cplx> rx) {
  std::vector<SensedPair> out;
  if (cfg.cos) {
    const waveform::TimeSignal sig{CVec(rx.begin(), rx.end()), cfg.system.bandwidth, 1};
    const auto x = sensing_cos::cos_demod(sig, cfg.system);
    const double a = analysis::a_critical(cfg.system.sigma_d2, cfg.system.m * cfg.system.n);
    out.push_back({"cos",
                   cfg.cos_guard ? sensing_cos::rdm_ratio_guarded(x, trial.tx_ft, a, cfg.system)
                                 : sensing_cos::rdm_ratio(x, trial.tx_ft, cfg.system),
                   sensing_cos::rdm_ccc(x, trial.tx_ft, cfg.system)});
  }
  for (const auto& seg : cfg.segmentation) {
    auto maps = sensing_vcp::sense(rx, trial.tx, seg, cfg.system);
    out.push_back({"vcp_M" + std::to_string(seg.m_tilde), std::move(maps.ratio), std::move(maps.ccc)});
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> truth_bins(const Rdm& rdm, const channel::TargetSet& targets,
                                                            const waveform::SystemParams& params) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& t : targets.targets) out.push_back(rdm.nearest_bin(t.delay_samples(params), t.doppler_norm(params)));
  return out;
}

double scenario_power(const ExperimentConfig& cfg) {
  Rng dummy(0);
  double p = 0.0;
  for (const auto& t : channel::scenario_targets(cfg.scenario, dummy)) p += t.sigma_p2;
  return p;
}

Aggregate mean_of(std::span<const double> values) {
  if (values.empty()) return {};
  double s = 0.0;
  for (double v : values) s += v;
  const double n = static_cast<double>(values.size());
  const double m = s / n;
  if (values.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

Aggregate ratio_of_means(std::span<const double> num, std::span<const double> den) {
  if (num.size() != den.size() || num.empty()) throw std::invalid_argument("ratio_of_means: size mismatch");
  const double n = static_cast<double>(num.size());
  double sn = 0.0, sd = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    sn += num[i];
    sd += den[i];
  }
  const double mn = sn / n, md = sd / n;
  const double r = md != 0.0 ? mn / md : std::numeric_limits<double>::infinity();
  if (num.size() < 2 || md == 0.0) return {r, 0.0};
  double acc = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    const double e = (num[i] - mn) - r * (den[i] - md);
    acc += e * e;
  }
  return {r, std::sqrt(acc / (n - 1.0) / n) / std::abs(md)};
}

const Curve& MonteCarloResult::curve(const std::string& name) const {
  for (const auto& c : curves)
    if (c.name() == name) return c;
  throw std::out_of_range("no curve named '" + name + "'");
}

namespace {

// Per-trial, per-curve, per-point samples.
struct CurveSamples {
  double signal = 0.0;
  double in = 0.0;
  std::vector<detector::MatchResult> match;  // per pf
  std::size_t cells = 0;
};

using TrialSamples = std::vector<std::vector<CurveSamples>>;  // [curve][point]

double theory_for(const ExperimentConfig& cfg, const std::string& tag, RdmKind kind, double sigma_w2,
                  double sigma_P2) {
  if (sigma_w2 <= 0.0) return std::numeric_limits<double>::infinity();
  analysis::SinrInputs in;
  in.gamma0 = cfg.system.sigma_d2 / sigma_w2;
  in.sigma_P2 = sigma_P2;
  in.total_samples = cfg.system.total_samples();
  in.m = cfg.system.m;
  in.n = cfg.system.n;
  in.q = cfg.system.q;
  if (tag == "cos") return analysis::sinr_cos(in, kind == RdmKind::ratio ? analysis::CosKind::ratio : analysis::CosKind::ccc);
  for (const auto& seg : cfg.segmentation) {
    if (tag != "vcp_M" + std::to_string(seg.m_tilde)) continue;
    in.m_tilde = seg.m_tilde;
    in.q_tilde = seg.q_tilde;
    in.q_bar = seg.q_bar;
    return kind == RdmKind::ratio ? analysis::sinr_ratio_vcp(in) : analysis::sinr_ccc_vcp(in);
  }
  throw std::logic_error("unknown curve tag " + tag);
}

}  // namespace

MonteCarloResult run_monte_carlo(const ExperimentConfig& cfg, const Measurements& what) {
  cfg.validate();
  const std::vector<double> noise = cfg.noise_powers();
  const std::vector<double> pfs = what.pfs.empty() ? std::vector<double>{cfg.cfar.pf} : what.pfs;

  MonteCarloResult res;
  res.point_name = cfg.gamma0_db.empty() ? "sigma_w2" : "gamma0_db";
  res.points = cfg.gamma0_db.empty() ? noise : cfg.gamma0_db;
  res.pfs = pfs;
  res.trials = cfg.trials;
  res.seed = cfg.seed;

  std::vector<std::string> tags;
  if (cfg.cos) tags.push_back("cos");
  for (const auto& s : cfg.segmentation) tags.push_back("vcp_M" + std::to_string(s.m_tilde));
  const std::size_t n_curves = 2 * tags.size();

  std::vector<TrialSamples> samples(cfg.trials);
  const unsigned workers = cfg.workers == 0 ? default_workers() : cfg.workers;
  parallel_for(cfg.trials, workers, [&](std::size_t trial) {
    const TrialData data = prepare_trial(cfg, trial);
    Rng noise_rng = RngFactory(cfg.seed).stream(Stream::noise, trial);
    TrialSamples out(n_curves, std::vector<CurveSamples>(noise.size()));
    CVec rx(data.echo.size());
    for (std::size_t p = 0; p < noise.size(); ++p) {
      rx = data.echo;
      channel::add_noise(rx, noise[p], noise_rng);
      const auto maps = sense_all(cfg, data, rx);
      for (std::size_t t = 0; t < maps.size(); ++t) {
        for (int kind = 0; kind < 2; ++kind) {
          const Rdm& rdm = kind == 0 ? maps[t].ratio : maps[t].ccc;
          CurveSamples& cs = out[2 * t + kind][p];
          const auto bins = truth_bins(rdm, data.targets, cfg.system);
          if (what.sinr && !bins.empty()) {
            const auto m = analysis::measure_sinr(rdm, bins, cfg.sinr);
            cs.signal = m.signal;
            cs.in = m.in_power;
          }
          if (what.detection && detector::window_fits(rdm.doppler_bins(), rdm.delay_bins(), cfg.cfar)) {
            cs.cells = rdm.values.size();
            for (double pf : pfs) {
              detector::CfarParams cp = cfg.cfar;
              cp.pf = pf;
              cs.match.push_back(detector::match_detections(detector::cfar_detect(rdm, cp), bins,
                                                            rdm.doppler_bins(), rdm.delay_bins()));
            }
          }
        }
      }
    }
    samples[trial] = std::move(out);
  });

  const double sigma_P2 = scenario_power(cfg);
  for (std::size_t c = 0; c < n_curves; ++c) {
    Curve curve;
    curve.tag = tags[c / 2];
    curve.kind = c % 2 == 0 ? RdmKind::ratio : RdmKind::ccc;
    for (std::size_t p = 0; p < noise.size(); ++p) {
      std::vector<double> sig, in;
      for (const auto& s : samples) {
        sig.push_back(s[c][p].signal);
        in.push_back(s[c][p].in);
      }
      curve.sinr.push_back(what.sinr ? ratio_of_means(sig, in) : Aggregate{});
      curve.theory.push_back(sigma_P2 > 0.0 ? theory_for(cfg, curve.tag, curve.kind, noise[p], sigma_P2) : 0.0);
      std::vector<Aggregate> pd_row, pfa_row;
      if (what.detection && !samples.empty() && !samples.front()[c][p].match.empty()) {
        for (std::size_t f = 0; f < pfs.size(); ++f) {
          std::vector<double> pd, pfa;
          for (const auto& s : samples) {
            const auto& m = s[c][p].match[f];
            pd.push_back(m.pd());
            pfa.push_back(static_cast<double>(m.false_alarms) / static_cast<double>(s[c][p].cells));
          }
          pd_row.push_back(mean_of(pd));
          pfa_row.push_back(mean_of(pfa));
        }
      }
      curve.pd.push_back(std::move(pd_row));
      curve.pfa.push_back(std::move(pfa_row));
    }
    res.curves.push_back(std::move(curve));
  }
  return res;
}

namespace {

ResultRow db_row(const std::string& sweep, double x, const std::string& metric, Aggregate a, std::size_t trials,
                 std::uint64_t seed) {
  const double db = a.mean > 0.0 ? analysis::to_db(a.mean) : std::numeric_limits<double>::quiet_NaN();
  const double se = a.mean > 0.0 ? 10.0 / std::log(10.0) * a.stderr_ / a.mean : 0.0;
  return {sweep, x, metric, db, se, trials, seed};
}

}  // namespace

ResultTable to_table(const MonteCarloResult& res) {
  ResultTable t;
  for (const auto& c : res.curves) {
    for (std::size_t p = 0; p < res.points.size(); ++p) {
      const double x = res.points[p];
      if (c.sinr[p].mean != 0.0 || c.sinr[p].stderr_ != 0.0) {
        t.add(db_row(res.point_name, x, c.name() + "_sim", c.sinr[p], res.trials, res.seed));
        t.add(db_row(res.point_name, x, c.name() + "_theory", {c.theory[p], 0.0}, res.trials, res.seed));
      }
      if (!c.pd[p].empty()) {
        t.add({res.point_name, x, c.name() + "_pd", c.pd[p][0].mean, c.pd[p][0].stderr_, res.trials, res.seed});
        t.add({res.point_name, x, c.name() + "_pfa", c.pfa[p][0].mean, c.pfa[p][0].stderr_, res.trials, res.seed});
      }
    }
  }
  return t;
}

}  // namespace isac::experiments
