#include <doctest.h>

#include <filesystem>
#include <cmath>
#include <set>

#include "isac/experiments/presets.hpp"
#include "isac/experiments/runner.hpp"

using namespace isac;
using namespace isac::experiments;
namespace fs = std::filesystem;

namespace {

// Row equality where NaN means "no dB value" on both sides.
bool same_rows(const std::vector<ResultRow>& a, const std::vector<ResultRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool nan = std::isnan(a[i].mean) && std::isnan(b[i].mean);
    ResultRow x = a[i], y = b[i];
    if (nan) x.mean = y.mean = 0.0;
    if (!(x == y)) return false;
  }
  return true;
}

ExperimentConfig quick() {
  ExperimentConfig c;
  c.trials = 4;
  c.gamma0_db = {-10.0, 10.0};
  c.segmentation = {{600, 128, 150}};
  return c;
}

}  // namespace

TEST_CASE("aggregation helpers") {
  const std::vector<double> x{1.0, 2.0, 3.0, 6.0};
  const auto m = mean_of(x);
  CHECK(m.mean == doctest::Approx(3.0));
  CHECK(m.stderr_ == doctest::Approx(std::sqrt(14.0 / 3.0 / 4.0)));
  CHECK(mean_of(std::vector<double>{}).mean == 0.0);
  CHECK(mean_of(std::vector<double>{5.0}).stderr_ == 0.0);

  const std::vector<double> num{2.0, 4.0, 6.0}, den{1.0, 2.0, 3.0};
  const auto r = ratio_of_means(num, den);
  CHECK(r.mean == doctest::Approx(2.0));
  CHECK(r.stderr_ == doctest::Approx(0.0).epsilon(1e-12));
  const std::vector<double> num2{1.0, 3.0}, den2{1.0, 1.0};
  const auto r2 = ratio_of_means(num2, den2);
  CHECK(r2.mean == doctest::Approx(2.0));
  CHECK(r2.stderr_ == doctest::Approx(1.0));
  CHECK_THROWS_AS(ratio_of_means(num, den2), std::invalid_argument);
}

TEST_CASE("trial preparation is deterministic per seed and trial") {
  const auto c = quick();
  const auto a = prepare_trial(c, 2), b = prepare_trial(c, 2), other = prepare_trial(c, 3);
  CHECK(a.tx == b.tx);
  CHECK(a.echo == b.echo);
  CHECK(a.tx != other.tx);
  CHECK(a.tx.size() == c.system.total_samples());
  CHECK(a.echo.size() == a.tx.size());
  CHECK(a.targets.size() == 3);
  const auto maps = sense_all(c, a, a.echo);
  REQUIRE(maps.size() == 2);
  CHECK(maps[0].tag == "cos");
  CHECK(maps[1].tag == "vcp_M600");
  CHECK(maps[1].ratio.values.rows() == c.segmentation[0].n_tilde(c.system.total_samples()));
  CHECK(maps[1].ratio.values.cols() == 600);
  CHECK(scenario_power(c) == doctest::Approx(1.11));
}

TEST_CASE("Monte Carlo results do not depend on the worker count") {
  auto c = quick();
  c.workers = 1;
  const auto one = run_monte_carlo(c, {.sinr = true, .detection = true, .pfs = {}});
  c.workers = 3;
  const auto three = run_monte_carlo(c, {.sinr = true, .detection = true, .pfs = {}});
  REQUIRE(one.curves.size() == 4);
  CHECK(one.point_name == "gamma0_db");
  CHECK(one.pfs == std::vector<double>{c.cfar.pf});
  for (std::size_t i = 0; i < one.curves.size(); ++i)
    for (std::size_t p = 0; p < 2; ++p) {
      CHECK(one.curves[i].sinr[p].mean == three.curves[i].sinr[p].mean);
      CHECK(one.curves[i].pd[p][0].mean == three.curves[i].pd[p][0].mean);
    }
  // SINR rises with gamma0 on every curve.
  for (const auto& cv : one.curves) CHECK(cv.sinr[1].mean > cv.sinr[0].mean);
  CHECK(one.curve("vcp_M600_ccc").theory[1] > one.curve("vcp_M600_ccc").theory[0]);
  CHECK_THROWS_AS(one.curve("nope"), std::out_of_range);

  const auto t = to_table(one);
  CHECK(t.select("cos_ratio_sim").size() == 2);
  CHECK(t.select("vcp_M600_ccc_theory").size() == 2);
  CHECK(t.select("vcp_M600_ratio_pd").size() == 2);
  CHECK(t.select("cos_ccc_pfa").size() == 2);
  for (const auto& row : t.rows) {
    CHECK(row.trials == 4);
    CHECK(row.seed == c.seed);
    CHECK(row.sweep_name == "gamma0_db");
  }
}

TEST_CASE("scaling rule") {
  CHECK(scaled_blocks(1.0) == 143);
  CHECK(scaled_trials(1.0) == 450);
  CHECK(scaled_blocks(kDeskScale) == 16);
  CHECK(scaled_blocks(0.1) == 14);
  CHECK(scaled_trials(0.1) == 45);
  CHECK(scaled_blocks(0.001) == 2);
  CHECK(scaled_trials(0.0001) == 1);
}

TEST_CASE("preset registry") {
  for (const char* n : {"fig3_sinr_vs_gamma0", "fig4_sinr_vs_qtilde", "fig5_6_sinr_vs_qbar", "fig7_8_pd_pfa_vs_gamma0",
                        "fig9_10_roc", "fig11_pd_vs_qbar", "lemma_validation", "proposition_validation"})
    CHECK(is_preset(n));
  CHECK_FALSE(is_preset("fig12"));
  CHECK_THROWS_AS(run_preset("fig12", {}), std::invalid_argument);
  PresetOptions bad;
  bad.scale = 0.0;
  CHECK_THROWS_AS(run_preset("fig3_sinr_vs_gamma0", bad), std::invalid_argument);
}

TEST_CASE("fig3 preset sweeps three segmentations and writes its files") {
  PresetOptions o;
  o.scale = 0.1;
  o.trials = 1;
  const auto run = run_preset("fig3_sinr_vs_gamma0", o);
  std::set<std::string> metrics;
  for (const auto& r : run.combined.rows) metrics.insert(r.metric);
  for (const char* m : {"vcp_M600_ratio_sim", "vcp_M1200_ratio_sim", "vcp_M1800_ccc_sim", "cos_ratio_theory"})
    CHECK(metrics.count(m) == 1);
  const auto& seg = run.manifest["configs"][0]["segmentation"];
  REQUIRE(seg.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(seg[i]["q_tilde"] == 128);
    CHECK(seg[i]["q_bar"] == 150);
  }
  CHECK(run.manifest["configs"][0]["system"]["N"] == 14);
  CHECK(run.manifest["configs"][0]["system"]["M"] == 512);
  CHECK(run.manifest["configs"][0]["system"]["Q"] == 128);

  const fs::path dir = fs::temp_directory_path() / "isac_unit" / "fig3";
  fs::remove_all(dir);
  write_preset(run, dir);
  CHECK(fs::exists(dir / "results.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "vcp_M600_ratio_sim.csv"));
  CHECK(same_rows(read_csv(dir / "results.csv").rows, run.combined.rows));
  CHECK(run.curves().size() == metrics.size());
}

TEST_CASE("fig4 preset places the target at (Q_bar - 1) c / 2B") {
  PresetOptions o;
  o.scale = 0.1;
  o.trials = 1;
  const auto run = run_preset("fig4_sinr_vs_qtilde", o);
  const auto& configs = run.manifest["configs"];
  REQUIRE(configs.size() == 4);
  for (const auto& c : configs) {
    const double qb = c["segmentation"][0]["q_bar"];
    const double range = c["scenario"]["targets"][0]["range"];
    CHECK(range == doctest::Approx((qb - 1.0) * kSpeedOfLight / (2.0 * 1.825e9)));
  }
  CHECK(run.combined.select("vcp_ratio_sim").size() == 4);
}
