#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "isac/rdm.hpp"
#include "isac/waveform.hpp"

// Sub-block sensing with a virtual cyclic prefix.
//
// The received block is cut into N~ sub-blocks of length M~ that overlap by
// Q_bar samples. Adding the Q~ samples that follow each sub-block onto its
// head turns every delayed echo inside it into a cyclic shift of the known
// transmitted segment, so data removal in the M~-point DFT domain works as
// with a real CP.
namespace isac::sensing_vcp {

struct SegmentationParams {
  std::size_t m_tilde = 600;
  std::size_t q_tilde = 128;
  std::size_t q_bar = 150;

  std::size_t hop() const noexcept { return m_tilde - q_bar; }

  // N~ = floor((I - Q~ - Q_bar) / (M~ - Q_bar)); 0 if I is too short.
  std::size_t n_tilde(std::size_t total_samples) const noexcept;

  // Throws unless M~ > Q~ + Q_bar, Q~ >= 1 and N~ >= 1 for this I.
  void validate(std::size_t total_samples) const;

  // Q_bar <= M~/2 - Q~; outside it the IN statistics lose their Gaussian shape.
  bool overlap_recommended() const noexcept;

  friend bool operator==(const SegmentationParams&, const SegmentationParams&) = default;
};

// N~ x M~ sub-blocks; row n starts at sample n(M~-Q_bar) of the source.
struct SubBlockSet {
  CMatrix rows;
  bool vcp_applied = false;
};

SubBlockSet segment(std::span<const cplx> x, const SegmentationParams& seg);

SubBlockSet add_vcp(SubBlockSet blocks, std::span<const cplx> x, const SegmentationParams& seg);

struct ReferenceSegments {
  SubBlockSet time;  // s_n[l]
  CMatrix freq;      // S_n[m]
};

ReferenceSegments reference_segments(std::span<const cplx> tx, const SegmentationParams& seg);

// Unitary M~-point DFT of each row.
CMatrix subblock_dft(const SubBlockSet& blocks);

// Masked ratio RDM: cells with |a S| < 1 contribute zero. `masked` receives
// the number of such cells when non-null.
Rdm rdm_ratio(const CMatrix& x, const CMatrix& s, double a, const SegmentationParams& seg, double ts,
              std::size_t* masked = nullptr);

Rdm rdm_ccc(const CMatrix& x, const CMatrix& s, const SegmentationParams& seg, double ts);

struct VcpRdms {
  Rdm ratio;
  Rdm ccc;
  std::size_t masked = 0;
  double a = 1.0;
};

// Steps 1-5 on one received block: segment, VCP, DFT, both RDMs. With no `a`
// the critical scaling a_c for (sigma_d2, I) is used.
VcpRdms sense(std::span<const cplx> rx, std::span<const cplx> tx, const SegmentationParams& seg,
              const waveform::SystemParams& params, std::optional<double> a = std::nullopt);

}  // namespace isac::sensing_vcp
