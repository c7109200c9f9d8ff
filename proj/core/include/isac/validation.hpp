#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "isac/channel.hpp"
#include "isac/parallel.hpp"
#include "isac/sensing_vcp.hpp"
#include "isac/waveform.hpp"

// Monte Carlo checks of the sub-block statistics (signal, noise and
// interference variances and correlations) and of the RDM background
// distributions, using integer-delay, zero-Doppler targets injected at the
// critical rate.
namespace isac::validation {

struct StatCheck {
  std::string name;
  double measured = 0.0;
  double theory = 0.0;
  double tolerance = 0.0;  // absolute, or relative when `relative`
  bool relative = false;
  bool informational = false;  // reported, never fails

  double error() const noexcept;
  bool pass() const noexcept;
};

struct StatReport {
  std::vector<StatCheck> checks;
  std::size_t samples = 0;
  std::size_t trials = 0;

  bool all_pass() const noexcept;
  const StatCheck& at(const std::string& name) const;
};

struct ValidationSetup {
  // One prefix per frame keeps the transmitted samples uncorrelated, which
  // the sub-block statistics assume; per-symbol prefixes repeat samples.
  waveform::SystemParams params{.n = 16, .waveform = waveform::Waveform::rcp_otfs};
  sensing_vcp::SegmentationParams seg{512, 128, 150};
  double sigma_w2 = 0.1;
  std::vector<double> target_delays{20.0};  // samples, integer
  std::vector<double> target_powers{1.0};
  std::size_t trials = 400;
  std::uint64_t seed = 1;
  unsigned workers = default_workers();
  std::size_t exclusion = 3;
  double corr_tol = 0.02;
  double var_tol = 0.10;
  double kurt_tol = 0.3;
  double peak_tol = 0.05;
  std::vector<std::size_t> kernel_lags{1, 2, 3, 4, 5, 6, 7, 8};

  channel::TargetSet targets() const;
};

// Splits the VCP'd noiseless sub-blocks into the ideal cyclic-shift part
// sum_p alpha_p s_n[(l - l_p) mod M~] and the remainder z_n[l].
struct Decomposition {
  CMatrix received;  // VCP'd noiseless rows
  CMatrix signal;
  CMatrix z;
};

Decomposition decompose_subblock(std::span<const cplx> rx_noiseless, std::span<const cplx> tx,
                                 const channel::TargetSet& targets, const sensing_vcp::SegmentationParams& seg,
                                 const waveform::SystemParams& params);

StatReport validate_lemmas(const ValidationSetup& setup);
StatReport validate_propositions(const ValidationSetup& setup);

// |sin(pi d Q~/M~) / (Q~ sin(pi d/M~))|: normalized correlation of Z_n[m]
// and Z_n[m+d].
double dirichlet_kernel(std::size_t lag, std::size_t q_tilde, std::size_t m_tilde);

}  // namespace isac::validation
