#include "isac/experiments/config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace isac::experiments {

using json = nlohmann::json;

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.preset == b.preset && a.system == b.system && a.segmentation == b.segmentation && a.cos == b.cos &&
         a.cos_guard == b.cos_guard && a.scenario == b.scenario && a.noise.sigma_w2 == b.noise.sigma_w2 && a.gamma0_db == b.gamma0_db &&
         a.cfar == b.cfar && a.rrc == b.rrc && a.use_rrc == b.use_rrc && a.sinr == b.sinr &&
         a.trials == b.trials && a.seed == b.seed;
}

std::vector<double> ExperimentConfig::noise_powers() const {
  if (gamma0_db.empty()) return {noise.sigma_w2};
  std::vector<double> out;
  for (double g : gamma0_db) out.push_back(system.sigma_d2 / analysis::from_db(g));
  return out;
}

void ExperimentConfig::validate() const {
  system.validate();
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!cos && segmentation.empty()) throw ConfigError("nothing to sense: cos disabled and no segmentation");
  for (const auto& s : segmentation) s.validate(system.total_samples());
  for (double g : gamma0_db)
    if (!std::isfinite(g)) throw ConfigError("gamma0_db values must be finite");
  if (noise.sigma_w2 < 0.0) throw ConfigError("noise.sigma_w2 must be >= 0");
  cfar.validate();
}

namespace {

class Reader {
 public:
  Reader(const json& j, std::string path, std::vector<std::string>* warnings)
      : j_(j), path_(std::move(path)), warnings_(warnings) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  template <typename T>
  void required(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError("missing required field '" + name(key) + "'");
    get(key, out);
  }

  template <typename T>
  void optional(const char* key, T& out) {
    seen_.insert(key);
    if (j_.contains(key)) get(key, out);
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const char* key) const { return j_.at(key); }
  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    if (warnings_ == nullptr) return;
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) warnings_->push_back("unknown field '" + name(key) + "' ignored");
  }

 private:
  std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

  template <typename T>
  void get(const char* key, T& out) {
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("field '" + name(key) + "': " + e.what());
    }
  }

  const json& j_;
  std::string path_;
  std::vector<std::string>* warnings_;
  std::set<std::string> seen_;
};

void read_system(const json& j, waveform::SystemParams& s, std::vector<std::string>* w) {
  Reader r(j, "system", w);
  r.required("fc", s.fc);
  r.required("B", s.bandwidth);
  r.required("M", s.m);
  r.required("N", s.n);
  r.required("Q", s.q);
  std::string wf(waveform::to_string(s.waveform)), cn(waveform::to_string(s.constellation));
  r.optional("waveform", wf);
  r.optional("constellation", cn);
  try {
    s.waveform = waveform::waveform_from_string(wf);
    s.constellation = waveform::constellation_from_string(cn);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("field 'system': ") + e.what());
  }
  r.optional("sigma_d2", s.sigma_d2);
  r.finish();
}

void read_segmentation(const json& j, std::vector<sensing_vcp::SegmentationParams>& out,
                       std::vector<std::string>* w) {
  out.clear();
  if (j.is_string()) {
    if (j.get<std::string>() != "follow-comm")
      throw ConfigError("field 'segmentation': expected a list or \"follow-comm\"");
    return;
  }
  const json items = j.is_array() ? j : json::array({j});
  for (std::size_t i = 0; i < items.size(); ++i) {
    Reader r(items[i], "segmentation[" + std::to_string(i) + "]", w);
    sensing_vcp::SegmentationParams s;
    r.required("m_tilde", s.m_tilde);
    r.required("q_tilde", s.q_tilde);
    r.required("q_bar", s.q_bar);
    r.finish();
    out.push_back(s);
  }
}

void read_scenario(const json& j, channel::ScenarioSpec& s, std::vector<std::string>* w) {
  Reader r(j, "scenario", w);
  r.required("name", s.name);
  r.optional("r_max", s.r_max);
  r.optional("v_max", s.v_max);
  r.optional("random_alpha", s.random_alpha);
  if (r.has("targets")) {
    s.targets.clear();
    const json& arr = r.at("targets");
    if (!arr.is_array()) throw ConfigError("field 'scenario.targets' must be a list");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Reader t(arr[i], "scenario.targets[" + std::to_string(i) + "]", w);
      channel::TargetSpec ts;
      t.required("sigma_p2", ts.sigma_p2);
      t.required("range", ts.range);
      t.optional("velocity", ts.velocity);
      t.finish();
      s.targets.push_back(ts);
    }
  }
  r.finish();
}

int line_of(const std::string& text, std::size_t byte) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(std::min(byte, text.size())), '\n'));
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, std::vector<std::string>* warnings) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config syntax error at line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }

  ExperimentConfig cfg;
  Reader r(j, "", warnings);
  r.optional("preset", cfg.preset);
  if (!r.has("system")) throw ConfigError("missing required field 'system'");
  read_system(r.at("system"), cfg.system, warnings);
  if (r.has("segmentation")) read_segmentation(r.at("segmentation"), cfg.segmentation, warnings);
  r.optional("cos", cfg.cos);
  r.optional("cos_guard", cfg.cos_guard);
  if (r.has("scenario")) read_scenario(r.at("scenario"), cfg.scenario, warnings);
  if (r.has("noise")) {
    Reader n(r.at("noise"), "noise", warnings);
    n.required("sigma_w2", cfg.noise.sigma_w2);
    n.finish();
  }
  r.optional("gamma0_db", cfg.gamma0_db);
  if (r.has("cfar")) {
    Reader c(r.at("cfar"), "cfar", warnings);
    c.required("pf", cfg.cfar.pf);
    c.optional("ng_k", cfg.cfar.ng_k);
    c.optional("ng_l", cfg.cfar.ng_l);
    c.optional("nr_k", cfg.cfar.nr_k);
    c.optional("nr_l", cfg.cfar.nr_l);
    c.finish();
  }
  if (r.has("rrc")) {
    Reader c(r.at("rrc"), "rrc", warnings);
    c.optional("rolloff", cfg.rrc.rolloff);
    c.optional("span", cfg.rrc.span);
    c.optional("factor", cfg.rrc.factor);
    c.optional("enabled", cfg.use_rrc);
    c.finish();
  }
  if (r.has("sinr")) {
    Reader c(r.at("sinr"), "sinr", warnings);
    c.optional("exclusion", cfg.sinr.exclusion);
    c.optional("halfwidth_k", cfg.sinr.halfwidth_k);
    c.optional("halfwidth_l", cfg.sinr.halfwidth_l);
    c.optional("sum", cfg.sinr.sum);
    c.optional("debias", cfg.sinr.debias);
    c.finish();
  }
  r.required("trials", cfg.trials);
  r.required("seed", cfg.seed);
  r.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), warnings);
}

std::string emit_config(const ExperimentConfig& cfg) {
  json j;
  if (!cfg.preset.empty()) j["preset"] = cfg.preset;
  const auto& s = cfg.system;
  j["system"] = {{"fc", s.fc},
                 {"B", s.bandwidth},
                 {"M", s.m},
                 {"N", s.n},
                 {"Q", s.q},
                 {"waveform", waveform::to_string(s.waveform)},
                 {"constellation", waveform::to_string(s.constellation)},
                 {"sigma_d2", s.sigma_d2}};
  if (cfg.segmentation.empty()) {
    j["segmentation"] = "follow-comm";
  } else {
    j["segmentation"] = json::array();
    for (const auto& g : cfg.segmentation)
      j["segmentation"].push_back({{"m_tilde", g.m_tilde}, {"q_tilde", g.q_tilde}, {"q_bar", g.q_bar}});
  }
  j["cos"] = cfg.cos;
  j["cos_guard"] = cfg.cos_guard;
  json targets = json::array();
  for (const auto& t : cfg.scenario.targets)
    targets.push_back({{"sigma_p2", t.sigma_p2}, {"range", t.range}, {"velocity", t.velocity}});
  j["scenario"] = {{"name", cfg.scenario.name},
                   {"r_max", cfg.scenario.r_max},
                   {"v_max", cfg.scenario.v_max},
                   {"random_alpha", cfg.scenario.random_alpha},
                   {"targets", targets}};
  j["noise"] = {{"sigma_w2", cfg.noise.sigma_w2}};
  j["gamma0_db"] = cfg.gamma0_db;
  j["cfar"] = {{"pf", cfg.cfar.pf},
               {"ng_k", cfg.cfar.ng_k},
               {"ng_l", cfg.cfar.ng_l},
               {"nr_k", cfg.cfar.nr_k},
               {"nr_l", cfg.cfar.nr_l}};
  j["rrc"] = {{"rolloff", cfg.rrc.rolloff}, {"span", cfg.rrc.span}, {"factor", cfg.rrc.factor},
              {"enabled", cfg.use_rrc}};
  j["sinr"] = {{"exclusion", cfg.sinr.exclusion},
               {"halfwidth_k", cfg.sinr.halfwidth_k},
               {"halfwidth_l", cfg.sinr.halfwidth_l},
               {"sum", cfg.sinr.sum},
               {"debias", cfg.sinr.debias}};
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << emit_config(cfg);
}

}  // namespace isac::experiments
