#include <doctest.h>

#include <random>

#include "isac/rdm.hpp"
#include "oracles.hpp"

using namespace isac;

TEST_CASE("range-Doppler transform matches the double sum") {
  std::mt19937_64 rng(1);
  const CMatrix y = oracle::gaussian_matrix(7, 12, rng);
  const CMatrix v = range_doppler_transform(y);
  const CMatrix ref = oracle::rdm_double_sum(y);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v.flat()[i] - ref.flat()[i]) < 1e-12);
}

TEST_CASE("signed Doppler covers (-K/2, K/2]") {
  Rdm even{CMatrix(8, 4), 10, 1.0};
  CHECK(even.signed_doppler(0) == 0);
  CHECK(even.signed_doppler(3) == 3);
  CHECK(even.signed_doppler(4) == 4);
  CHECK(even.signed_doppler(5) == -3);
  CHECK(even.signed_doppler(7) == -1);
  Rdm odd{CMatrix(7, 4), 10, 1.0};
  CHECK(odd.signed_doppler(3) == 3);
  CHECK(odd.signed_doppler(4) == -3);
}

TEST_CASE("nearest bin and resolutions") {
  Rdm r{CMatrix(16, 600), 450, 1.0 / 1.825e9};
  CHECK(r.delay_resolution() == doctest::Approx(1.0 / 1.825e9));
  CHECK(r.doppler_resolution() == doctest::Approx(1.825e9 / (450.0 * 16.0)));
  // k = stride * K * nu Ts
  CHECK(r.nearest_bin(12.4, 2.0 / (450.0 * 16.0)) == std::pair<std::size_t, std::size_t>{2, 12});
  CHECK(r.nearest_bin(12.6, -1.0 / (450.0 * 16.0)) == std::pair<std::size_t, std::size_t>{15, 13});
  CHECK(r.nearest_bin(601.0, 0.0).second == 1);
  CHECK_THROWS_AS(Rdm{}.nearest_bin(0.0, 0.0), std::invalid_argument);
}
