#include "isac/sensing_vcp.hpp"

#include <stdexcept>
#include <string>

#include "isac/analysis.hpp"
#include "isac/fft.hpp"

namespace isac::sensing_vcp {

std::size_t SegmentationParams::n_tilde(std::size_t total_samples) const noexcept {
  if (m_tilde <= q_bar || total_samples < q_tilde + q_bar) return 0;
  return (total_samples - q_tilde - q_bar) / (m_tilde - q_bar);
}

void SegmentationParams::validate(std::size_t total_samples) const {
  if (q_tilde < 1) throw std::invalid_argument("q_tilde must be >= 1");
  if (m_tilde <= q_tilde + q_bar) throw std::invalid_argument("m_tilde must exceed q_tilde + q_bar");
  if (n_tilde(total_samples) < 1)
    throw std::invalid_argument("block of " + std::to_string(total_samples) +
                                " samples yields no complete sub-block");
}

bool SegmentationParams::overlap_recommended() const noexcept {
  return 2 * (q_bar + q_tilde) <= m_tilde;
}

SubBlockSet segment(std::span<const cplx> x, const SegmentationParams& seg) {
  seg.validate(x.size());
  const std::size_t nt = seg.n_tilde(x.size());
  SubBlockSet out{CMatrix(nt, seg.m_tilde), false};
  for (std::size_t n = 0; n < nt; ++n) {
    const cplx* src = x.data() + n * seg.hop();
    auto row = out.rows.row(n);
    std::copy(src, src + seg.m_tilde, row.begin());
  }
  return out;
}

SubBlockSet add_vcp(SubBlockSet blocks, std::span<const cplx> x, const SegmentationParams& seg) {
  if (blocks.vcp_applied) throw std::invalid_argument("add_vcp: VCP already applied");
  if (blocks.rows.cols() != seg.m_tilde) throw std::invalid_argument("add_vcp: row length differs from m_tilde");
  const std::size_t nt = blocks.rows.rows();
  if (nt > 0 && (nt - 1) * seg.hop() + seg.m_tilde + seg.q_tilde > x.size())
    throw std::invalid_argument("add_vcp: source too short for the last VCP");
  for (std::size_t n = 0; n < nt; ++n) {
    const cplx* tail = x.data() + n * seg.hop() + seg.m_tilde;
    auto row = blocks.rows.row(n);
    for (std::size_t j = 0; j < seg.q_tilde; ++j) row[j] += tail[j];
  }
  blocks.vcp_applied = true;
  return blocks;
}

ReferenceSegments reference_segments(std::span<const cplx> tx, const SegmentationParams& seg) {
  ReferenceSegments ref{segment(tx, seg), {}};
  ref.freq = subblock_dft(ref.time);
  return ref;
}

CMatrix subblock_dft(const SubBlockSet& blocks) {
  CMatrix x = blocks.rows;
  fft::transform_rows(x, fft::Direction::forward);
  return x;
}

Rdm rdm_ratio(const CMatrix& x, const CMatrix& s, double a, const SegmentationParams& seg, double ts,
              std::size_t* masked) {
  if (!(a > 0.0)) throw std::invalid_argument("ratio scaling a must be positive");
  if (x.rows() != s.rows() || x.cols() != s.cols()) throw std::invalid_argument("VCP: X and S dimensions differ");
  CMatrix y(x.rows(), x.cols());
  auto xs = x.flat();
  auto ss = s.flat();
  auto ys = y.flat();
  const double thr = 1.0 / (a * a);
  std::size_t count = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (std::norm(ss[i]) < thr) {
      ++count;
      continue;
    }
    ys[i] = xs[i] / (a * ss[i]);
  }
  if (masked != nullptr) *masked = count;
  return {range_doppler_transform(std::move(y)), seg.hop(), ts, RdmKind::ratio, RdmOrigin::vcp};
}

Rdm rdm_ccc(const CMatrix& x, const CMatrix& s, const SegmentationParams& seg, double ts) {
  if (x.rows() != s.rows() || x.cols() != s.cols()) throw std::invalid_argument("VCP: X and S dimensions differ");
  CMatrix y(x.rows(), x.cols());
  auto xs = x.flat();
  auto ss = s.flat();
  auto ys = y.flat();
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = xs[i] * std::conj(ss[i]);
  return {range_doppler_transform(std::move(y)), seg.hop(), ts, RdmKind::ccc, RdmOrigin::vcp};
}

VcpRdms sense(std::span<const cplx> rx, std::span<const cplx> tx, const SegmentationParams& seg,
              const waveform::SystemParams& params, std::optional<double> a) {
  if (rx.size() != tx.size()) throw std::invalid_argument("VCP: rx and tx lengths differ");
  const CMatrix x = subblock_dft(add_vcp(segment(rx, seg), rx, seg));
  const ReferenceSegments ref = reference_segments(tx, seg);
  const double scale = a ? *a : analysis::a_critical(params.sigma_d2, tx.size());
  std::size_t masked = 0;
  Rdm ratio = rdm_ratio(x, ref.freq, scale, seg, params.ts(), &masked);
  return {std::move(ratio), rdm_ccc(x, ref.freq, seg, params.ts()), masked, scale};
}

}  // namespace isac::sensing_vcp
