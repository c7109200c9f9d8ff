#pragma once

#include "isac/rdm.hpp"
#include "isac/waveform.hpp"

// Classical per-symbol OFDM sensing: strip each CP, M-point DFT, remove the
// data by division or conjugate multiplication, then a 2-D DFT.
namespace isac::sensing_cos {

// X_n[m]; row n, column m. rx must hold exactly N(M+Q) samples.
waveform::FreqTimeGrid cos_demod(const waveform::TimeSignal& rx, const waveform::SystemParams& params);

// Throws if any S[m,n] is zero.
Rdm rdm_ratio(const waveform::FreqTimeGrid& x, const waveform::FreqTimeGrid& s,
              const waveform::SystemParams& params);
// Divides by a*S and zeroes cells with |a S| < 1; counts them in `masked`.
// Needed when S is Gaussian-like (OTFS grids), where 1/S has no variance.
Rdm rdm_ratio_guarded(const waveform::FreqTimeGrid& x, const waveform::FreqTimeGrid& s, double a,
                      const waveform::SystemParams& params, std::size_t* masked = nullptr);
Rdm rdm_ccc(const waveform::FreqTimeGrid& x, const waveform::FreqTimeGrid& s,
            const waveform::SystemParams& params);

// (1/sqrt(x)) sin(pi y)/sin(pi y/x) e^{j pi (x-1) y / x}; sqrt(x) at y = 0 mod x.
cplx sinc_kernel(std::size_t x, double y);

}  // namespace isac::sensing_cos
