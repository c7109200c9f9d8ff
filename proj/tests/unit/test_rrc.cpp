#include <doctest.h>

#include <random>

#include "isac/rrc.hpp"
#include "oracles.hpp"

using namespace isac;
using namespace isac::rrc;

namespace {

CVec qpsk(std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution bit;
  CVec x(n);
  const double s = 1.0 / std::sqrt(2.0);
  for (auto& v : x) v = {bit(rng) ? s : -s, bit(rng) ? s : -s};
  return x;
}

}  // namespace

TEST_CASE("taps are symmetric, unit energy and span*L+1 long") {
  const auto h = rrc_taps(0.2, 4, 32);
  REQUIRE(h.size() == 129);
  double e = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(h[i] == doctest::Approx(h[h.size() - 1 - i]).epsilon(1e-12));
    e += h[i] * h[i];
  }
  CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
  // Peak at the centre.
  for (double v : h) CHECK(v <= h[64]);
  // rolloff 0.25 puts a sample exactly on the t = 1/(4 beta) singularity.
  for (double v : rrc_taps(0.25, 4, 8)) CHECK(std::isfinite(v));
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(rrc_taps(0.0, 4, 32), std::invalid_argument);
  CHECK_THROWS_AS(rrc_taps(1.5, 4, 32), std::invalid_argument);
  CHECK_THROWS_AS(rrc_taps(0.2, 0, 32), std::invalid_argument);
  CHECK_THROWS_AS(rrc_taps(0.2, 4, 0), std::invalid_argument);
  waveform::TimeSignal x{CVec(8), 1.0, 1};
  CHECK_THROWS_AS(rrc_filter(x, {}, RrcMode::decimate), std::invalid_argument);
}

TEST_CASE("impulse in gives the delay-compensated impulse response") {
  const RrcFilter f({0.2, 8, 4});
  CVec x(16);
  x[8] = 1.0;
  const CVec y = f.interpolate(x);
  const auto& h = f.taps();
  const auto d = static_cast<long long>(f.group_delay());
  for (long long n = 0; n < static_cast<long long>(y.size()); ++n) {
    const long long idx = n + d - 8 * 4;
    const double ref = idx >= 0 && idx < static_cast<long long>(h.size()) ? h[static_cast<std::size_t>(idx)] : 0.0;
    CHECK(std::abs(y[static_cast<std::size_t>(n)] - cplx(ref)) < 1e-15);
  }
  // Symmetric about the original sample position.
  for (long long j = 1; j < 16; ++j) CHECK(std::abs(y[static_cast<std::size_t>(32 + j)] - y[static_cast<std::size_t>(32 - j)]) < 1e-15);
}

TEST_CASE("L = 1 preserves white-noise energy") {
  std::mt19937_64 rng(1);
  const CVec x = oracle::gaussian_vector(200000, rng);
  const auto y = rrc_filter({x, 1.0, 1}, {0.2, 32, 1}, RrcMode::interpolate);
  CHECK(energy(y.samples) == doctest::Approx(energy(x)).epsilon(0.005));
}

TEST_CASE("x4 interpolate then /4 decimate returns the symbols") {
  std::mt19937_64 rng(2);
  const CVec x = qpsk(2048, rng);
  const RrcConfig cfg{0.2, 32, 4};
  const auto up = rrc_filter({x, 1.0, 1}, cfg, RrcMode::interpolate);
  CHECK(up.oversample == 4);
  CHECK(up.samples.size() == x.size() * 4);
  const auto down = rrc_filter(up, cfg, RrcMode::decimate);
  CHECK(down.oversample == 1);
  REQUIRE(down.samples.size() == x.size());
  // Away from the block edges, where the cascade is truncated.
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 64; i < x.size() - 64; ++i) {
    err += std::norm(down.samples[i] - x[i]);
    ref += std::norm(x[i]);
  }
  CHECK(10.0 * std::log10(err / ref) < -40.0);
}
