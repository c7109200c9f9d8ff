#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isac/detector.hpp"
#include "isac/experiments/config.hpp"
#include "isac/experiments/csv.hpp"
#include "isac/rdm.hpp"

namespace isac::experiments {

// Transmit block, targets and noiseless echo of one Monte Carlo trial. All
// randomness comes from the (seed, stream, trial) generators, so a trial is
// reproducible on its own.
struct TrialData {
  CVec tx;
  waveform::FreqTimeGrid tx_ft;
  channel::TargetSet targets;
  CVec echo;
};

TrialData prepare_trial(const ExperimentConfig& cfg, std::size_t trial);

struct SensedPair {
  std::string tag;  // "cos" or "vcp_M<m_tilde>"
  Rdm ratio;
  Rdm ccc;
};

std::vector<SensedPair> sense_all(const ExperimentConfig& cfg, const TrialData& trial, std::span<const cplx> rx);

std::vector<std::pair<std::size_t, std::size_t>> truth_bins(const Rdm& rdm, const channel::TargetSet& targets,
                                                            const waveform::SystemParams& params);

// Sum of the scenario's mean target powers.
double scenario_power(const ExperimentConfig& cfg);

struct Aggregate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Mean of per-trial values with its standard error.
Aggregate mean_of(std::span<const double> values);
// sum(num)/sum(den) with a delta-method standard error.
Aggregate ratio_of_means(std::span<const double> num, std::span<const double> den);

struct Curve {
  std::string tag;
  RdmKind kind = RdmKind::ratio;
  std::vector<Aggregate> sinr;                // per point, linear
  std::vector<double> theory;                 // per point, linear
  std::vector<std::vector<Aggregate>> pd;     // [point][pf]
  std::vector<std::vector<Aggregate>> pfa;    // [point][pf]

  std::string name() const { return tag + (kind == RdmKind::ratio ? "_ratio" : "_ccc"); }
};

struct MonteCarloResult {
  std::string point_name;     // "gamma0_db" or "sigma_w2"
  std::vector<double> points;
  std::vector<double> pfs;
  std::vector<Curve> curves;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  const Curve& curve(const std::string& name) const;
};

struct Measurements {
  bool sinr = true;
  bool detection = false;
  std::vector<double> pfs;  // empty: cfg.cfar.pf only
};

MonteCarloResult run_monte_carlo(const ExperimentConfig& cfg, const Measurements& what);

// SINR metrics in dB ("<curve>_sim", "<curve>_theory") and detection metrics
// ("<curve>_pd", "<curve>_pfa") over the sweep points, for the first pf.
ResultTable to_table(const MonteCarloResult& res);

}  // namespace isac::experiments
