#include "isac/rdm.hpp"

#include <cmath>

#include "isac/fft.hpp"

namespace isac {

long long Rdm::signed_doppler(std::size_t k) const noexcept {
  const auto n = static_cast<long long>(doppler_bins());
  const auto kk = static_cast<long long>(k);
  return kk > n / 2 ? kk - n : kk;
}

std::pair<std::size_t, std::size_t> Rdm::nearest_bin(double delay_samples, double doppler_norm) const {
  if (values.empty()) throw std::invalid_argument("nearest_bin: empty RDM");
  const double k = static_cast<double>(stride) * static_cast<double>(doppler_bins()) * doppler_norm;
  return {wrap_index(std::llround(k), doppler_bins()), wrap_index(std::llround(delay_samples), delay_bins())};
}

CMatrix range_doppler_transform(CMatrix y) {
  fft::transform_rows(y, fft::Direction::inverse);
  fft::transform_cols(y, fft::Direction::forward);
  return y;
}

}  // namespace isac
