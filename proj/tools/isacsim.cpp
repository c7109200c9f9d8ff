#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "isac/experiments/config.hpp"
#include "isac/experiments/presets.hpp"
#include "isac/experiments/rdm_io.hpp"
#include "isac/experiments/runner.hpp"
#include "isac/validation.hpp"

namespace fs = std::filesystem;
namespace ex = isac::experiments;

namespace {

struct CommonFlags {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<double> scale;
  std::optional<std::size_t> trials;
  std::string out = ".";
  unsigned workers = 0;
};

void add_common(CLI::App& app, CommonFlags& f) {
  app.add_option("--config", f.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--preset", f.preset, "Named preset");
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--scale", f.scale, "Size scale; 1 is the full 143-block frame")->check(CLI::PositiveNumber);
  app.add_option("--trials", f.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--workers", f.workers, "Worker threads (0: all cores)");
}

ex::ExperimentConfig load(const CommonFlags& f) {
  ex::ExperimentConfig cfg;
  if (!f.config.empty()) {
    std::vector<std::string> warnings;
    cfg = ex::load_config(f.config, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (f.scale) cfg.system.n = ex::scaled_blocks(*f.scale);
  cfg.workers = f.workers;
  cfg.validate();
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

// One trial of the config at its first noise point: every RDM as CSV plus the
// realized targets.
int cmd_simulate(const CommonFlags& f) {
  const auto cfg = load(f);
  const fs::path out = f.out;
  fs::create_directories(out);
  const auto trial = ex::prepare_trial(cfg, 0);
  auto rx = trial.echo;
  isac::Rng noise = isac::RngFactory(cfg.seed).stream(isac::Stream::noise, 0);
  isac::channel::add_noise(rx, cfg.noise_powers().front(), noise);

  std::string targets = "p,range,velocity,delay_samples,doppler_norm,alpha_re,alpha_im\n";
  for (std::size_t p = 0; p < trial.targets.size(); ++p) {
    const auto& t = trial.targets.targets[p];
    char buf[256];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p, t.range, t.velocity,
                  t.delay_samples(cfg.system), t.doppler_norm(cfg.system), t.alpha.real(), t.alpha.imag());
    targets += buf;
  }
  write_text(out / "targets.csv", targets);
  for (const auto& m : ex::sense_all(cfg, trial, rx)) {
    ex::write_rdm(m.ratio, out / (m.tag + "_ratio.csv"));
    ex::write_rdm(m.ccc, out / (m.tag + "_ccc.csv"));
    std::cout << "wrote " << (out / (m.tag + "_ratio.csv")).string() << " and " << m.tag << "_ccc.csv\n";
  }
  ex::save_config(cfg, out / "config.json");
  return 0;
}

int cmd_sweep(const CommonFlags& f) {
  if (!f.config.empty()) {
    const auto cfg = load(f);
    const auto res = ex::run_monte_carlo(cfg, {.sinr = true, .detection = true, .pfs = {}});
    fs::create_directories(f.out);
    ex::emit_csv(ex::to_table(res), fs::path(f.out) / "results.csv");
    ex::save_config(cfg, fs::path(f.out) / "config.json");
    std::cout << "wrote " << (fs::path(f.out) / "results.csv").string() << "\n";
    return 0;
  }
  if (f.preset.empty()) throw std::invalid_argument("sweep needs --preset or --config");
  ex::PresetOptions opts;
  if (f.scale) opts.scale = *f.scale;
  opts.trials = f.trials;
  opts.seed = f.seed;
  opts.workers = f.workers;
  const auto run = ex::run_preset(f.preset, opts);
  const fs::path dir = fs::path(f.out) / f.preset;
  ex::write_preset(run, dir);
  std::cout << "wrote " << run.combined.rows.size() << " rows to " << dir.string() << "\n";
  return 0;
}

int cmd_validate(const CommonFlags& f, bool strict) {
  const std::string which = f.preset.empty() ? "all" : f.preset;
  if (which != "all" && which != "lemma_validation" && which != "proposition_validation")
    throw std::invalid_argument("validate --preset must be lemma_validation or proposition_validation");
  isac::validation::ValidationSetup setup;
  if (f.scale) setup.params.n = ex::scaled_blocks(*f.scale);
  if (f.seed) setup.seed = *f.seed;
  if (f.trials) setup.trials = *f.trials;
  if (f.workers) setup.workers = f.workers;

  bool ok = true;
  auto print = [&](const char* title, const isac::validation::StatReport& rep) {
    std::printf("%s (%zu trials)\n", title, rep.trials);
    for (const auto& c : rep.checks) {
      const char* verdict = c.informational ? "INFO" : (c.pass() ? "PASS" : "FAIL");
      std::printf("  %-4s %-22s measured %-12.6g theory %-12.6g\n", verdict, c.name.c_str(), c.measured, c.theory);
      ok = ok && (c.informational || c.pass());
    }
  };
  if (which != "proposition_validation") print("lemmas", isac::validation::validate_lemmas(setup));
  if (which != "lemma_validation") print("propositions", isac::validation::validate_propositions(setup));
  return strict && !ok ? 2 : 0;
}

int cmd_cfar(const CommonFlags& f, const std::string& rdm_path, std::optional<double> pf) {
  isac::detector::CfarParams params;
  if (!f.config.empty()) params = load(f).cfar;
  if (pf) params.pf = *pf;
  params.validate();
  const auto rdm = ex::read_rdm(rdm_path);
  const auto dets = isac::detector::cfar_detect(rdm, params);
  const std::string text = ex::format_detections(dets);
  if (f.out == "-") {
    std::cout << text;
  } else {
    fs::create_directories(f.out);
    write_text(fs::path(f.out) / "detections.csv", text);
    std::cout << dets.size() << " detections written to " << (fs::path(f.out) / "detections.csv").string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-Doppler ISAC sensing simulator"};
  app.require_subcommand(1);
  bool list = false;
  app.add_flag("--list-presets", list, "Print preset names and exit");

  CommonFlags sim_f, sweep_f, val_f, cfar_f;
  auto* sim = app.add_subcommand("simulate", "Run one trial and dump every RDM as CSV");
  add_common(*sim, sim_f);
  auto* sweep = app.add_subcommand("sweep", "Run a preset (or a config) and write result CSVs");
  add_common(*sweep, sweep_f);
  auto* val = app.add_subcommand("validate", "Check the sub-block and RDM statistics against theory");
  add_common(*val, val_f);
  bool strict = false;
  val->add_flag("--strict", strict, "Exit with status 2 if any check fails");
  auto* cfar = app.add_subcommand("cfar", "Run CA-CFAR on an RDM CSV");
  add_common(*cfar, cfar_f);
  std::string rdm_path;
  std::optional<double> pf;
  cfar->add_option("--rdm", rdm_path, "RDM CSV written by simulate")->required()->check(CLI::ExistingFile);
  cfar->add_option("--pf", pf, "False-alarm probability");
  cfar_f.out = "-";

  if (argc > 1 && std::string(argv[1]) == "--list-presets") {
    for (const auto& n : ex::preset_names()) std::cout << n << "\n";
    return 0;
  }
  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(sim_f);
    if (*sweep) return cmd_sweep(sweep_f);
    if (*val) return cmd_validate(val_f, strict);
    if (*cfar) return cmd_cfar(cfar_f, rdm_path, pf);
  } catch (const std::exception& e) {
    std::cerr << "isacsim: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
