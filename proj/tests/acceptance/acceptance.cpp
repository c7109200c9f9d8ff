// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "isac/analysis.hpp"
#include "isac/detector.hpp"
#include "isac/experiments/presets.hpp"
#include "isac/experiments/runner.hpp"
#include "isac/fft.hpp"
#include "isac/sensing_vcp.hpp"
#include "isac/validation.hpp"
#include "isac/waveform.hpp"
#include "oracles.hpp"

namespace ex = isac::experiments;
using isac::CMatrix;
using isac::cplx;
using isac::CVec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double db(double lin) {
  return lin > 0.0 ? 10.0 * std::log10(lin) : -std::numeric_limits<double>::infinity();
}

ex::ExperimentConfig desk_config() {
  ex::ExperimentConfig cfg;
  cfg.system.n = 16;
  cfg.sinr = {.exclusion = 3, .halfwidth_k = 0, .halfwidth_l = 1, .sum = true, .debias = true};
  cfg.workers = 0;
  return cfg;
}

Outcome a1() {
  auto cfg = desk_config();
  cfg.segmentation = {{600, 128, 150}, {1200, 128, 150}};
  cfg.cos = false;
  cfg.gamma0_db = {-30, -25, -20, -15, -10, -5, 0, 5, 10};
  cfg.trials = 1000;
  const auto res = ex::run_monte_carlo(cfg, {.sinr = true, .detection = false, .pfs = {}});
  double worst = 0.0;
  std::string where;
  for (const auto& c : res.curves)
    for (std::size_t p = 0; p < res.points.size(); ++p) {
      const double d = std::abs(db(c.sinr[p].mean) - db(c.theory[p]));
      if (!(d <= worst)) {
        worst = d;
        where = c.name() + fmt(" at %g dB", res.points[p]);
      }
    }
  return {worst <= 1.5, "max |sim - theory| = " + fmt("%.2f dB", worst) + " (" + where + "), 1000 trials"};
}

Outcome a2() {
  std::vector<double> vr, vc, cr, cc;
  for (std::size_t qt : {100, 200, 300, 400}) {
    auto cfg = desk_config();
    cfg.system.n = 48;
    const std::size_t mt = 4 * qt;
    const auto qb = static_cast<std::size_t>(std::lround(static_cast<double>(mt) / 3.0));
    cfg.segmentation = {{mt, qt, qb}};
    cfg.scenario.name = "explicit";
    cfg.scenario.targets = {
        {1.0, static_cast<double>(qb - 1) * isac::kSpeedOfLight / (2.0 * cfg.system.bandwidth), 0.0}};
    cfg.gamma0_db = {20.0};
    cfg.trials = 200;
    const auto res = ex::run_monte_carlo(cfg, {.sinr = true, .detection = false, .pfs = {}});
    const std::string tag = "vcp_M" + std::to_string(mt);
    vr.push_back(db(res.curve(tag + "_ratio").sinr[0].mean));
    vc.push_back(db(res.curve(tag + "_ccc").sinr[0].mean));
    cr.push_back(db(res.curve("cos_ratio").sinr[0].mean));
    cc.push_back(db(res.curve("cos_ccc").sinr[0].mean));
  }
  const auto spread = [](const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
  };
  const double sr = spread(vr), sc = spread(vc);
  const double dr = cr.front() - cr.back(), dc = cc.front() - cc.back();
  const bool ok = sr < 1.0 && sc < 1.0 && dr >= 10.0 && dc >= 10.0;
  return {ok, "proposed spread ratio " + fmt("%.2f", sr) + " / ccc " + fmt("%.2f dB", sc) + "; COS drop ratio " +
                  fmt("%.1f", dr) + " / ccc " + fmt("%.1f dB", dc)};
}

Outcome a3() {
  isac::validation::ValidationSetup s;
  s.trials = 400;
  const auto rep = isac::validation::validate_lemmas(s);
  std::string failed;
  for (const auto& c : rep.checks)
    if (!c.informational && !c.pass()) failed += " " + c.name;
  const auto& w = rep.at("cov_W");
  return {failed.empty() && rep.samples >= 100000,
          std::to_string(rep.samples) + " samples; |E[W_n W_n+1*]|/sigma_w^2 " + fmt("%.3f", w.measured) +
              " vs " + fmt("%.3f", w.theory) + "; corr_S " + fmt("%.3f", rep.at("corr_S").measured) +
              (failed.empty() ? "" : "; failed:" + failed)};
}

Outcome a4() {
  isac::validation::ValidationSetup s;
  s.trials = 100;
  const auto rep = isac::validation::validate_propositions(s);
  std::string failed;
  double worst_kurt = 0.0;
  for (const auto& c : rep.checks) {
    if (!c.informational && !c.pass()) failed += " " + c.name;
    if (c.name.rfind("kurt", 0) == 0) worst_kurt = std::max(worst_kurt, std::abs(c.measured));
  }
  return {failed.empty(), "max |kurtosis| " + fmt("%.3f", worst_kurt) + "; var ratio err " +
                              fmt("%.1f%%", 100 * rep.at("var_ratio_in").error()) + ", ccc err " +
                              fmt("%.1f%%", 100 * rep.at("var_ccc_in").error()) +
                              (failed.empty() ? "" : "; failed:" + failed)};
}

Outcome a5() {
  isac::detector::CfarParams p;
  p.pf = 1e-3;
  const std::size_t omega = isac::detector::reference_cell_count(p);
  const double beta3 = isac::detector::threshold_factor(p);
  isac::detector::CfarParams p6 = p;
  p6.pf = 1e-6;
  const double beta6 = isac::detector::threshold_factor(p6);

  std::mt19937_64 rng(5);
  std::size_t cells = 0, alarms = 0;
  while (cells < 1'000'000) {
    const CMatrix v = oracle::gaussian_matrix(22, 600, rng);
    alarms += isac::detector::cfar_count(v, p);
    cells += v.size();
  }
  // The same test on noise-only maps from the full receive chain.
  auto cfg = desk_config();
  cfg.scenario.name = "explicit";
  cfg.noise.sigma_w2 = 1.0;
  std::size_t pipe_cells = 0, pipe_alarms = 0;
  for (std::size_t t = 0; pipe_cells < 1'000'000; ++t) {
    const auto trial = ex::prepare_trial(cfg, t);
    CVec rx(trial.tx.size());
    isac::Rng nr = isac::RngFactory(cfg.seed).stream(isac::Stream::noise, t);
    isac::channel::add_noise(rx, 1.0, nr);
    const auto maps = isac::sensing_vcp::sense(rx, trial.tx, cfg.segmentation.front(), cfg.system);
    pipe_alarms += isac::detector::cfar_count(maps.ratio.values, p);
    pipe_cells += maps.ratio.values.size();
  }
  const double rate = static_cast<double>(alarms) / static_cast<double>(cells);
  const double pipe = static_cast<double>(pipe_alarms) / static_cast<double>(pipe_cells);
  const double beta6_ref = 138.0 * (std::pow(1e-6, -1.0 / 138.0) - 1.0);
  const bool ok = omega == 138 && std::abs(beta6 - beta6_ref) < 1e-12 && std::abs(beta6 - 14.53) < 0.01 &&
                  rate >= 0.5e-3 && rate <= 2e-3 && pipe >= 0.5e-3 && pipe <= 2e-3;
  return {ok, "|Omega| " + std::to_string(omega) + ", beta(1e-3) " + fmt("%.3f", beta3) + ", beta(1e-6) " +
                  fmt("%.2f", beta6) + "; Pfa " + fmt("%.2e", rate) + " (Gaussian), " + fmt("%.2e", pipe) +
                  " (VCP ratio chain), over >=1e6 cells"};
}

Outcome a6() {
  auto cfg = desk_config();
  cfg.scenario.name = "detection10";
  cfg.segmentation = {{600, 128, 150}};
  cfg.cfar.pf = 1e-3;
  cfg.gamma0_db = {-25, -20, -15};
  cfg.trials = 400;
  const auto res = ex::run_monte_carlo(cfg, {.sinr = false, .detection = true, .pfs = {}});
  bool ok = true;
  std::string detail;
  for (const char* kind : {"ratio", "ccc"}) {
    const auto& v = res.curve(std::string("vcp_M600_") + kind);
    const auto& c = res.curve(std::string("cos_") + kind);
    detail += std::string(kind) + " Pd";
    for (std::size_t p = 0; p < res.points.size(); ++p) {
      ok = ok && v.pd[p][0].mean >= c.pd[p][0].mean;
      if (p > 0) ok = ok && v.pd[p][0].mean >= v.pd[p - 1][0].mean && c.pd[p][0].mean >= c.pd[p - 1][0].mean;
      detail += " " + fmt("%.3f", v.pd[p][0].mean) + "/" + fmt("%.3f", c.pd[p][0].mean);
    }
    detail += "; ";
  }
  return {ok, detail + "proposed/COS at -25,-20,-15 dB, 400 trials"};
}

Outcome a7() {
  auto cfg = desk_config();
  cfg.segmentation = {{600, 128, 150}};
  const double sigma_P2 = ex::scenario_power(cfg);
  cfg.gamma0_db = {10.0 * std::log10(1e-3 / sigma_P2)};
  cfg.trials = 4000;
  const auto res = ex::run_monte_carlo(cfg, {.sinr = true, .detection = false, .pfs = {}});
  const auto& seg = cfg.segmentation.front();
  const double eps_v = 1.0 / static_cast<double>(seg.m_tilde * seg.n_tilde(cfg.system.total_samples()));
  const double eps_c = 1.0 / static_cast<double>(cfg.system.m * cfg.system.n);
  const double gap_v = db(res.curve("vcp_M600_ccc").sinr[0].mean) - db(res.curve("vcp_M600_ratio").sinr[0].mean);
  const double gap_c = db(res.curve("cos_ccc").sinr[0].mean) - db(res.curve("cos_ratio").sinr[0].mean);
  const double bv = db(isac::analysis::b_penalty(eps_v)), bc = db(isac::analysis::b_penalty(eps_c));
  const bool ok = std::abs(gap_v - bv) <= 1.0 && std::abs(gap_c - bc) <= 1.0;
  return {ok, "proposed gap " + fmt("%.2f", gap_v) + " vs b " + fmt("%.2f dB", bv) + "; COS gap " + fmt("%.2f", gap_c) +
                  " vs b " + fmt("%.2f dB", bc) + ", 4000 trials"};
}

Outcome a8() {
  std::mt19937_64 rng(8);
  std::vector<std::string> bad;

  double parseval = 0.0, dft_err = 0.0;
  for (std::size_t n : {64, 600, 1024}) {
    const CVec x = oracle::gaussian_vector(n, rng);
    const CVec y = isac::fft::transform(x, isac::fft::Direction::forward);
    parseval = std::max(parseval, std::abs(isac::energy(y) - isac::energy(x)) / isac::energy(x));
    if (n == 64) {
      const CVec ref = oracle::dft(x, -1);
      for (std::size_t i = 0; i < n; ++i) dft_err = std::max(dft_err, std::abs(ref[i] - y[i]));
    }
  }
  if (parseval > 1e-12 || dft_err > 1e-12) bad.push_back("dft");

  double rt = 0.0;
  for (auto w : {isac::waveform::Waveform::cp_otfs, isac::waveform::Waveform::rcp_otfs,
                 isac::waveform::Waveform::ofdm, isac::waveform::Waveform::dft_s_ofdm}) {
    isac::waveform::SystemParams sp{.m = 64, .n = 8, .q = 16, .waveform = w};
    isac::Rng r(3);
    const auto d = isac::waveform::draw_data(sp, r);
    const auto back = isac::waveform::demodulate(isac::waveform::modulate(d, sp), sp);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < d.d.size(); ++i) {
      num += std::norm(back.d.flat()[i] - d.d.flat()[i]);
      den += std::norm(d.d.flat()[i]);
    }
    rt = std::max(rt, std::sqrt(num / den));
  }
  if (rt > 1e-10) bad.push_back("round trip");

  {
    CVec x(10);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = {static_cast<double>(i), 0.0};
    const isac::sensing_vcp::SegmentationParams small{4, 1, 1};
    const auto blocks = isac::sensing_vcp::segment(x, small);
    const bool seg_ok = small.n_tilde(10) == 2 && blocks.rows.rows() == 2 && blocks.rows(0, 0) == cplx(0, 0) &&
                        blocks.rows(1, 0) == cplx(3, 0) &&
                        isac::sensing_vcp::SegmentationParams{512, 128, 150}.n_tilde(91520) == 252;
    CVec y(10);
    for (std::size_t i = 0; i < 10; ++i) y[i] = {static_cast<double>(i + 1), 0.0};
    const isac::sensing_vcp::SegmentationParams vcp{8, 2, 0};
    const auto v = isac::sensing_vcp::add_vcp(isac::sensing_vcp::segment(y, vcp), y, vcp);
    const bool vcp_ok = v.rows(0, 0) == cplx(1 + 9, 0) && v.rows(0, 1) == cplx(2 + 10, 0) && v.rows(0, 2) == cplx(3, 0);
    if (!seg_ok || !vcp_ok) bad.push_back("segmentation");
  }

  isac::detector::CfarParams p;
  const double ring = 11.0 * 17.0 - 49.0;
  if (isac::detector::reference_cell_count(p) != 138 ||
      isac::detector::threshold_factor(p) != ring * (std::pow(p.pf, -1.0 / ring) - 1.0))
    bad.push_back("cfar constants");

  double rdm_err = 0.0;
  for (int rep = 0; rep < 4; ++rep) {
    const CMatrix y = oracle::gaussian_matrix(16, 8, rng);
    const CMatrix fast = isac::range_doppler_transform(y);
    const CMatrix slow = oracle::rdm_double_sum(y);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      num += std::norm(fast.flat()[i] - slow.flat()[i]);
      den += std::norm(slow.flat()[i]);
    }
    rdm_err = std::max(rdm_err, std::sqrt(num / den));
  }
  if (rdm_err > 1e-10) bad.push_back("rdm");

  std::string failed;
  for (const auto& b : bad) failed += " " + b;
  return {bad.empty(), "Parseval " + fmt("%.1e", parseval) + ", round trip " + fmt("%.1e", rt) + ", RDM vs double sum " +
                           fmt("%.1e", rdm_err) + (failed.empty() ? "" : "; failed:" + failed)};
}

Outcome a9() {
  const auto start = std::chrono::steady_clock::now();
  const auto run = ex::run_preset("fig3_sinr_vs_gamma0", {.scale = 1.0, .trials = 1, .seed = 1, .workers = 0});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& cfg = run.manifest.at("configs").at(0).at("system");
  const std::size_t n = cfg.at("N").get<std::size_t>();
  bool finite = !run.combined.rows.empty();
  for (const auto& r : run.combined.select("vcp_M600_ccc_sim")) finite = finite && std::isfinite(r.mean);
  isac::waveform::SystemParams full;
  return {n == 143 && full.total_samples() == 91520 && finite,
          "fig3 preset at scale 1 (N=" + std::to_string(n) + ", I=91520), " + std::to_string(run.combined.rows.size()) +
              " rows in " + fmt("%.0f s", secs)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9},
  };
  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    if (argc > 1 && std::find(argv + 1, argv + argc, id) == argv + argc) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s  %s  [%.1f s]\n", id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures;
}
