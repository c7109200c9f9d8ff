#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "isac/rng.hpp"
#include "isac/types.hpp"

namespace isac::waveform {

enum class Waveform { cp_otfs, rcp_otfs, ofdm, dft_s_ofdm };
enum class Constellation { qpsk, qam16, qam64 };

std::string_view to_string(Waveform w);
std::string_view to_string(Constellation c);
Waveform waveform_from_string(std::string_view s);
Constellation constellation_from_string(std::string_view s);

// Carrier, bandwidth and grid dimensions of one transmitted block.
// Defaults are the IEEE 802.11ad-like configuration (I = 91 520).
struct SystemParams {
  double fc = 60.48e9;         // Hz
  double bandwidth = 1.825e9;  // Hz
  std::size_t m = 512;         // sub-carriers / delay bins per symbol
  std::size_t n = 143;         // symbols / Doppler bins per block
  std::size_t q = 128;         // communication CP length (samples)
  Waveform waveform = Waveform::cp_otfs;
  Constellation constellation = Constellation::qam64;
  double sigma_d2 = 1.0;  // data-symbol power (linear)

  double ts() const noexcept { return 1.0 / bandwidth; }
  bool per_symbol_cp() const noexcept { return waveform != Waveform::rcp_otfs; }

  // I: N(M+Q) with per-symbol CP, MN+Q for RCP-OTFS.
  std::size_t total_samples() const noexcept;

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

// Data symbols d_{kM+l}; row k (Doppler), column l (delay).
struct DataGrid {
  CMatrix d;
};

// S[m,n]; row n (symbol), column m (sub-carrier).
struct FreqTimeGrid {
  CMatrix values;
};

// s[l,n]; row n holds the M time samples of symbol n.
struct ColumnSignal {
  CMatrix values;
};

struct TimeSignal {
  CVec samples;
  double rate = 0.0;         // samples/s
  unsigned oversample = 1;   // relative to the bandwidth B
};

// Gray-coded square constellation scaled to average power sigma_d2. Point i
// carries the bit pattern i.
CVec constellation_points(Constellation c, double sigma_d2);

DataGrid draw_data(const SystemParams& params, Rng& rng);

// Delay-Doppler to frequency-time mapping under critical sampling. DFT-s-OFDM
// skips the Doppler-axis transform, OFDM skips both.
FreqTimeGrid map_dd_to_ft(const DataGrid& grid, const SystemParams& params);
DataGrid map_ft_to_dd(const FreqTimeGrid& grid, const SystemParams& params);

// Unitary M-point IDFT of every symbol.
ColumnSignal ft_to_time(const FreqTimeGrid& grid, const SystemParams& params);
FreqTimeGrid time_to_ft(const ColumnSignal& cols);

// [last Q of symbol n | symbol n] for every n; length N(M+Q).
TimeSignal add_cp(const ColumnSignal& cols, const SystemParams& params);
// [last Q samples of symbol N-1 | symbols 0..N-1]; length MN+Q.
TimeSignal add_rcp(const ColumnSignal& cols, const SystemParams& params);

// Inverse of add_cp / add_rcp for a block of exactly I samples.
ColumnSignal strip_cp(std::span<const cplx> block, const SystemParams& params);

// Full transmit chain: grid mapping, IDFT, CP insertion. Critically sampled.
TimeSignal modulate(const DataGrid& grid, const SystemParams& params);

// Noiseless receiver inverse of modulate.
DataGrid demodulate(const TimeSignal& signal, const SystemParams& params);

}  // namespace isac::waveform
