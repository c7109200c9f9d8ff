#include "isac/waveform.hpp"

#include <cmath>
#include <string>

#include "isac/fft.hpp"

namespace isac::waveform {

std::string_view to_string(Waveform w) {
  switch (w) {
    case Waveform::cp_otfs: return "CP-OTFS";
    case Waveform::rcp_otfs: return "RCP-OTFS";
    case Waveform::ofdm: return "OFDM";
    case Waveform::dft_s_ofdm: return "DFT-s-OFDM";
  }
  return "?";
}

std::string_view to_string(Constellation c) {
  switch (c) {
    case Constellation::qpsk: return "QPSK";
    case Constellation::qam16: return "16-QAM";
    case Constellation::qam64: return "64-QAM";
  }
  return "?";
}

Waveform waveform_from_string(std::string_view s) {
  for (auto w : {Waveform::cp_otfs, Waveform::rcp_otfs, Waveform::ofdm, Waveform::dft_s_ofdm})
    if (s == to_string(w)) return w;
  throw std::invalid_argument("unknown waveform '" + std::string(s) + "'");
}

Constellation constellation_from_string(std::string_view s) {
  for (auto c : {Constellation::qpsk, Constellation::qam16, Constellation::qam64})
    if (s == to_string(c)) return c;
  throw std::invalid_argument("unknown constellation '" + std::string(s) + "'");
}

std::size_t SystemParams::total_samples() const noexcept {
  return per_symbol_cp() ? n * (m + q) : m * n + q;
}

void SystemParams::validate() const {
  if (m == 0) throw std::invalid_argument("M must be positive");
  if (n == 0) throw std::invalid_argument("N must be >= 1");
  if (!(bandwidth > 0.0)) throw std::invalid_argument("B must be positive");
  if (!(sigma_d2 > 0.0)) throw std::invalid_argument("sigma_d2 must be positive");
  if (per_symbol_cp() && q >= m) throw std::invalid_argument("Q must be smaller than M");
  if (!per_symbol_cp() && q >= m * n) throw std::invalid_argument("Q must be smaller than MN");
}

namespace {

std::size_t gray_to_binary(std::size_t g) {
  std::size_t b = g;
  while (g >>= 1) b ^= g;
  return b;
}

void check_grid(const CMatrix& g, const SystemParams& p, const char* what) {
  if (g.rows() != p.n || g.cols() != p.m)
    throw std::invalid_argument(std::string(what) + ": grid is " + std::to_string(g.rows()) + "x" +
                                std::to_string(g.cols()) + ", expected NxM = " +
                                std::to_string(p.n) + "x" + std::to_string(p.m));
}

}  // namespace

CVec constellation_points(Constellation c, double sigma_d2) {
  const std::size_t bits_per_axis = c == Constellation::qpsk ? 1 : c == Constellation::qam16 ? 2 : 3;
  const std::size_t levels = std::size_t{1} << bits_per_axis;
  const std::size_t order = levels * levels;
  const double e_avg = 2.0 * (static_cast<double>(order) - 1.0) / 3.0;
  const double scale = std::sqrt(sigma_d2 / e_avg);

  CVec points(order);
  for (std::size_t i = 0; i < order; ++i) {
    const std::size_t gi = i >> bits_per_axis;
    const std::size_t gq = i & (levels - 1);
    const auto amp = [&](std::size_t g) {
      return 2.0 * static_cast<double>(gray_to_binary(g)) - static_cast<double>(levels - 1);
    };
    points[i] = scale * cplx(amp(gi), amp(gq));
  }
  return points;
}

DataGrid draw_data(const SystemParams& params, Rng& rng) {
  const CVec points = constellation_points(params.constellation, params.sigma_d2);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  DataGrid grid{CMatrix(params.n, params.m)};
  for (auto& v : grid.d.flat()) v = points[pick(rng)];
  return grid;
}

// S[m,n] = 1/sqrt(MN) sum_k sum_l d_{kM+l} e^{j2pi(nk/N - ml/M)}: a forward
// M-point DFT along delay and an inverse N-point DFT along Doppler.
FreqTimeGrid map_dd_to_ft(const DataGrid& grid, const SystemParams& params) {
  check_grid(grid.d, params, "map_dd_to_ft");
  CMatrix s = grid.d;
  if (params.waveform == Waveform::ofdm) return {std::move(s)};
  fft::transform_rows(s, fft::Direction::forward);
  if (params.waveform != Waveform::dft_s_ofdm) fft::transform_cols(s, fft::Direction::inverse);
  return {std::move(s)};
}

DataGrid map_ft_to_dd(const FreqTimeGrid& grid, const SystemParams& params) {
  check_grid(grid.values, params, "map_ft_to_dd");
  CMatrix d = grid.values;
  if (params.waveform == Waveform::ofdm) return {std::move(d)};
  if (params.waveform != Waveform::dft_s_ofdm) fft::transform_cols(d, fft::Direction::forward);
  fft::transform_rows(d, fft::Direction::inverse);
  return {std::move(d)};
}

ColumnSignal ft_to_time(const FreqTimeGrid& grid, const SystemParams& params) {
  check_grid(grid.values, params, "ft_to_time");
  CMatrix s = grid.values;
  fft::transform_rows(s, fft::Direction::inverse);
  return {std::move(s)};
}

FreqTimeGrid time_to_ft(const ColumnSignal& cols) {
  CMatrix s = cols.values;
  fft::transform_rows(s, fft::Direction::forward);
  return {std::move(s)};
}

TimeSignal add_cp(const ColumnSignal& cols, const SystemParams& params) {
  const std::size_t m = params.m, n = params.n, q = params.q;
  if (q >= m) throw std::invalid_argument("add_cp: Q must be smaller than M");
  check_grid(cols.values, params, "add_cp");
  TimeSignal out{CVec(n * (m + q)), params.bandwidth, 1};
  for (std::size_t k = 0; k < n; ++k) {
    auto sym = cols.values.row(k);
    cplx* dst = out.samples.data() + k * (m + q);
    for (std::size_t i = 0; i < q; ++i) dst[i] = sym[m - q + i];
    for (std::size_t i = 0; i < m; ++i) dst[q + i] = sym[i];
  }
  return out;
}

TimeSignal add_rcp(const ColumnSignal& cols, const SystemParams& params) {
  const std::size_t m = params.m, n = params.n, q = params.q;
  if (q >= m * n) throw std::invalid_argument("add_rcp: Q must be smaller than MN");
  check_grid(cols.values, params, "add_rcp");
  const auto serial = cols.values.flat();
  TimeSignal out{CVec(m * n + q), params.bandwidth, 1};
  for (std::size_t i = 0; i < q; ++i) out.samples[i] = serial[m * n - q + i];
  for (std::size_t i = 0; i < m * n; ++i) out.samples[q + i] = serial[i];
  return out;
}

ColumnSignal strip_cp(std::span<const cplx> block, const SystemParams& params) {
  if (block.size() != params.total_samples())
    throw std::invalid_argument("strip_cp: block has " + std::to_string(block.size()) +
                                " samples, expected " + std::to_string(params.total_samples()));
  const std::size_t m = params.m, n = params.n, q = params.q;
  ColumnSignal cols{CMatrix(n, m)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t start = params.per_symbol_cp() ? k * (m + q) + q : q + k * m;
    auto row = cols.values.row(k);
    for (std::size_t i = 0; i < m; ++i) row[i] = block[start + i];
  }
  return cols;
}

TimeSignal modulate(const DataGrid& grid, const SystemParams& params) {
  params.validate();
  const ColumnSignal cols = ft_to_time(map_dd_to_ft(grid, params), params);
  return params.per_symbol_cp() ? add_cp(cols, params) : add_rcp(cols, params);
}

DataGrid demodulate(const TimeSignal& signal, const SystemParams& params) {
  params.validate();
  return map_ft_to_dd(time_to_ft(strip_cp(signal.samples, params)), params);
}

}  // namespace isac::waveform
