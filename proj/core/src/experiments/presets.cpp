#include "isac/experiments/presets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

#include "isac/experiments/runner.hpp"
#include "isac/validation.hpp"

namespace isac::experiments {
namespace {

using Json = nlohmann::json;
using sensing_vcp::SegmentationParams;

std::size_t cfar_rows(const detector::CfarParams& c) { return 2 * (c.ng_k + c.nr_k) + 1; }

struct Context {
  PresetOptions opts;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  Json notes = Json::array();
  Json configs = Json::array();
};

ExperimentConfig base(const Context& ctx, const std::string& name) {
  ExperimentConfig cfg;
  cfg.preset = name;
  cfg.system.n = ctx.n;
  cfg.trials = ctx.trials;
  cfg.seed = ctx.seed;
  cfg.workers = ctx.opts.workers;
  cfg.sinr = {.exclusion = 3, .halfwidth_k = 0, .halfwidth_l = 1, .sum = true, .debias = true};
  // At reduced N, 1e-6 needs far more cells than one trial offers.
  cfg.cfar.pf = ctx.n < 143 ? 1e-3 : 1e-6;
  return cfg;
}

// Drops segmentations whose RDM cannot hold the CFAR window.
void keep_cfar_capable(ExperimentConfig& cfg, Context& ctx) {
  const std::size_t total = cfg.system.total_samples();
  std::vector<SegmentationParams> kept;
  for (const auto& s : cfg.segmentation) {
    if (s.n_tilde(total) >= cfar_rows(cfg.cfar))
      kept.push_back(s);
    else
      ctx.notes.push_back("M~=" + std::to_string(s.m_tilde) + " skipped: " + std::to_string(s.n_tilde(total)) +
                          " sub-blocks cannot hold the CFAR window");
  }
  cfg.segmentation = std::move(kept);
}

void keep_valid(ExperimentConfig& cfg) {
  const std::size_t total = cfg.system.total_samples();
  std::erase_if(cfg.segmentation, [&](const SegmentationParams& s) { return s.n_tilde(total) == 0; });
}

std::string retag(std::string metric, const std::string& from, const std::string& to) {
  if (metric.rfind(from, 0) == 0) metric.replace(0, from.size(), to);
  return metric;
}

std::string gamma_label(double g) {
  return "g" + std::to_string(static_cast<long long>(std::lround(g))) + "dB";
}

void record(Context& ctx, const ExperimentConfig& cfg) { ctx.configs.push_back(Json::parse(emit_config(cfg))); }

ResultTable fig3(Context& ctx) {
  ExperimentConfig cfg = base(ctx, "fig3_sinr_vs_gamma0");
  cfg.segmentation = {{600, 128, 150}, {1200, 128, 150}, {1800, 128, 150}};
  keep_valid(cfg);
  cfg.gamma0_db = {-30, -25, -20, -15, -10, -5, 0, 5, 10, 15, 20};
  record(ctx, cfg);
  return to_table(run_monte_carlo(cfg, {.sinr = true, .detection = false, .pfs = {}}));
}

ResultTable fig4(Context& ctx) {
  ResultTable out;
  for (std::size_t qt : {100, 200, 300, 400}) {
    ExperimentConfig cfg = base(ctx, "fig4_sinr_vs_qtilde");
    const std::size_t mt = 4 * qt;
    const auto qb = static_cast<std::size_t>(std::lround(static_cast<double>(mt) / 3.0));
    cfg.segmentation = {{mt, qt, qb}};
    cfg.cos = false;
    cfg.scenario.name = "explicit";
    cfg.scenario.targets = {{1.0, static_cast<double>(qb - 1) * kSpeedOfLight / (2.0 * cfg.system.bandwidth), 0.0}};
    cfg.gamma0_db = {20.0};
    record(ctx, cfg);
    const auto t = to_table(run_monte_carlo(cfg, {.sinr = true, .detection = false, .pfs = {}}));
    for (auto r : t.rows) {
      r.sweep_name = "q_tilde";
      r.sweep_value = static_cast<double>(qt);
      r.metric = retag(r.metric, "vcp_M" + std::to_string(mt), "vcp");
      out.add(std::move(r));
    }
  }
  return out;
}

ResultTable qbar_sweep(Context& ctx, const std::string& name, bool detection) {
  ResultTable out;
  for (std::size_t qb : {0, 50, 100, 150, 200, 250, 300}) {
    ExperimentConfig cfg = base(ctx, name);
    cfg.cos = false;
    cfg.segmentation = detection ? std::vector<SegmentationParams>{{600, 128, qb}}
                                 : std::vector<SegmentationParams>{{600, 128, qb}, {1200, 128, qb}};
    if (detection) {
      cfg.scenario.name = "detection10";
      keep_cfar_capable(cfg, ctx);
    } else {
      keep_valid(cfg);
    }
    if (cfg.segmentation.empty()) continue;
    cfg.gamma0_db = {-20.0, 10.0};
    record(ctx, cfg);
    const auto t = to_table(run_monte_carlo(cfg, {.sinr = !detection, .detection = detection, .pfs = {}}));
    for (auto r : t.rows) {
      r.metric += "_" + gamma_label(r.sweep_value);
      r.sweep_name = "q_bar";
      r.sweep_value = static_cast<double>(qb);
      out.add(std::move(r));
    }
  }
  return out;
}

ResultTable fig7_8(Context& ctx) {
  ExperimentConfig cfg = base(ctx, "fig7_8_pd_pfa_vs_gamma0");
  cfg.scenario.name = "detection10";
  cfg.segmentation = {{600, 128, 150}, {1200, 128, 150}, {1800, 128, 150}};
  keep_cfar_capable(cfg, ctx);
  cfg.gamma0_db = {-30, -25, -20, -15, -10, -5, 0};
  record(ctx, cfg);
  return to_table(run_monte_carlo(cfg, {.sinr = false, .detection = true, .pfs = {}}));
}

ResultTable fig9_10(Context& ctx) {
  ResultTable out;
  const std::vector<double> pfs{1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  for (std::size_t qt : {100, 400}) {
    ExperimentConfig cfg = base(ctx, "fig9_10_roc");
    // The larger case needs enough sub-blocks for the CFAR window.
    cfg.system.n = std::max<std::size_t>(ctx.n, 48);
    const std::size_t mt = 4 * qt;
    cfg.segmentation = {{mt, qt, static_cast<std::size_t>(std::lround(static_cast<double>(mt) / 3.0))}};
    cfg.scenario.name = "detection10";
    cfg.scenario.r_max = static_cast<double>(qt) * kSpeedOfLight / (2.0 * cfg.system.bandwidth);
    keep_cfar_capable(cfg, ctx);
    cfg.gamma0_db = {-15.0, 15.0};
    record(ctx, cfg);
    const auto res = run_monte_carlo(cfg, {.sinr = false, .detection = true, .pfs = pfs});
    for (const auto& c : res.curves) {
      const std::string tag = retag(c.name(), "vcp_M" + std::to_string(mt), "vcp");
      for (std::size_t p = 0; p < res.points.size(); ++p) {
        const std::string suffix = "_q" + std::to_string(qt) + "_" + gamma_label(res.points[p]);
        for (std::size_t f = 0; f < pfs.size(); ++f) {
          out.add({"pf", pfs[f], tag + "_pd" + suffix, c.pd[p][f].mean, c.pd[p][f].stderr_, res.trials, res.seed});
          out.add({"pf", pfs[f], tag + "_pfa" + suffix, c.pfa[p][f].mean, c.pfa[p][f].stderr_, res.trials, res.seed});
        }
      }
    }
  }
  return out;
}

void add_report(ResultTable& out, const validation::StatReport& rep, const std::string& prefix, std::size_t trials,
                std::uint64_t seed) {
  for (const auto& c : rep.checks) {
    out.add({"statistic", 0.0, prefix + c.name, c.measured, 0.0, trials, seed});
    out.add({"statistic", 0.0, prefix + c.name + "_theory", c.theory, 0.0, trials, seed});
  }
}

validation::ValidationSetup setup_for(const Context& ctx, std::size_t default_trials) {
  validation::ValidationSetup s;
  s.params.n = ctx.n;
  s.trials = ctx.opts.trials.value_or(default_trials);
  s.seed = ctx.seed;
  if (ctx.opts.workers != 0) s.workers = ctx.opts.workers;
  return s;
}

ResultTable lemmas(Context& ctx) {
  const auto s = setup_for(ctx, 400);
  ResultTable out;
  add_report(out, validation::validate_lemmas(s), "", s.trials, s.seed);
  return out;
}

ResultTable propositions(Context& ctx) {
  auto s = setup_for(ctx, 100);
  ResultTable out;
  add_report(out, validation::validate_propositions(s), "", s.trials, s.seed);
  s.seg.q_bar = 300;
  add_report(out, validation::validate_propositions(s), "overlap300_", s.trials, s.seed);
  return out;
}

using Runner = std::function<ResultTable(Context&)>;

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> r{
      {"fig3_sinr_vs_gamma0", fig3},
      {"fig4_sinr_vs_qtilde", fig4},
      {"fig5_6_sinr_vs_qbar", [](Context& c) { return qbar_sweep(c, "fig5_6_sinr_vs_qbar", false); }},
      {"fig7_8_pd_pfa_vs_gamma0", fig7_8},
      {"fig9_10_roc", fig9_10},
      {"fig11_pd_vs_qbar", [](Context& c) { return qbar_sweep(c, "fig11_pd_vs_qbar", true); }},
      {"lemma_validation", lemmas},
      {"proposition_validation", propositions},
  };
  return r;
}

std::string safe_filename(const std::string& metric) {
  std::string out = metric;
  for (char& ch : out)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') ch = '_';
  return out;
}

}  // namespace

std::size_t scaled_blocks(double scale) {
  return static_cast<std::size_t>(std::max(2L, std::lround(143.0 * scale)));
}

std::size_t scaled_trials(double scale) {
  return static_cast<std::size_t>(std::max(1L, std::lround(450.0 * scale)));
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

bool is_preset(const std::string& name) { return registry().count(name) != 0; }

std::vector<std::pair<std::string, ResultTable>> PresetRun::curves() const {
  std::vector<std::pair<std::string, ResultTable>> out;
  for (const auto& m : combined.metrics()) {
    ResultTable t;
    t.rows = combined.select(m);
    out.emplace_back(m, std::move(t));
  }
  return out;
}

PresetRun run_preset(const std::string& name, const PresetOptions& opts) {
  const auto it = registry().find(name);
  if (it == registry().end()) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown preset '" + name + "' (known: " + known + ")");
  }
  if (!(opts.scale > 0.0)) throw std::invalid_argument("scale must be > 0");
  if (opts.trials && *opts.trials == 0) throw std::invalid_argument("trials must be >= 1");

  Context ctx;
  ctx.opts = opts;
  ctx.n = scaled_blocks(opts.scale);
  ctx.trials = opts.trials.value_or(scaled_trials(opts.scale));
  ctx.seed = opts.seed.value_or(1);

  PresetRun run;
  run.name = name;
  run.combined = it->second(ctx);
  run.manifest = {
      {"preset", name},
      {"scale", opts.scale},
      {"n_blocks", ctx.n},
      {"trials", ctx.trials},
      {"seed", ctx.seed},
      {"doppler_sign_convention", "nu > 0 for approaching targets"},
      {"sinr_units", "dB"},
      {"csv_header", kCsvHeader},
      {"configs", ctx.configs},
      {"notes", ctx.notes},
  };
  return run;
}

void write_preset(const PresetRun& run, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  emit_csv(run.combined, dir / "results.csv");
  Json files = Json::array({"results.csv"});
  for (const auto& [metric, table] : run.curves()) {
    const std::string file = safe_filename(metric) + ".csv";
    emit_csv(table, dir / file);
    files.push_back(file);
  }
  Json manifest = run.manifest;
  manifest["files"] = files;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + (dir / "manifest.json").string() + "'");
  out << manifest.dump(2) << "\n";
}

}  // namespace isac::experiments
