#include <doctest.h>

#include <random>

#include "isac/analysis.hpp"
#include "isac/channel.hpp"
#include "isac/sensing_vcp.hpp"
#include "oracles.hpp"

using namespace isac;
using namespace isac::sensing_vcp;

namespace {

CVec ramp(std::size_t n) {
  CVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
  return x;
}

std::size_t argmax(const CMatrix& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v.flat()[i]) > std::abs(v.flat()[best])) best = i;
  return best;
}

}  // namespace

TEST_CASE("sub-block count") {
  CHECK(SegmentationParams{4, 1, 1}.n_tilde(10) == 2);
  CHECK(SegmentationParams{512, 128, 150}.n_tilde(91520) == 252);
  CHECK(SegmentationParams{512, 128, 150}.n_tilde(100) == 0);
  CHECK(SegmentationParams{512, 128, 150}.hop() == 362);
  CHECK(SegmentationParams{600, 128, 150}.overlap_recommended());
  CHECK_FALSE(SegmentationParams{600, 128, 250}.overlap_recommended());
  CHECK_THROWS_AS(SegmentationParams({100, 0, 10}).validate(1000), std::invalid_argument);
  CHECK_THROWS_AS(SegmentationParams({100, 50, 50}).validate(1000), std::invalid_argument);
  CHECK_THROWS_AS(SegmentationParams({600, 128, 150}).validate(500), std::invalid_argument);
}

TEST_CASE("segmentation") {
  SUBCASE("small case") {
    const auto b = segment(ramp(10), {4, 1, 1});
    REQUIRE(b.rows.rows() == 2);
    CHECK(b.rows(0, 0) == 0.0);
    CHECK(b.rows(1, 0) == 3.0);
    CHECK(b.rows(1, 3) == 6.0);
    CHECK_FALSE(b.vcp_applied);
  }
  SUBCASE("no overlap gives consecutive chunks") {
    const auto b = segment(ramp(50), {8, 2, 0});
    REQUIRE(b.rows.rows() == 6);
    for (std::size_t n = 0; n < 6; ++n)
      for (std::size_t l = 0; l < 8; ++l) CHECK(b.rows(n, l) == static_cast<double>(8 * n + l));
  }
  SUBCASE("reference segments are the same cut plus a DFT") {
    std::mt19937_64 g(1);
    const CVec tx = oracle::gaussian_vector(400, g);
    const SegmentationParams seg{40, 8, 10};
    const auto ref = reference_segments(tx, seg);
    CHECK(ref.time.rows == segment(tx, seg).rows);
    for (std::size_t n = 0; n < ref.freq.rows(); ++n) {
      const CVec row(ref.time.rows.row(n).begin(), ref.time.rows.row(n).end());
      const CVec d = oracle::dft(row, -1);
      for (std::size_t m = 0; m < 40; ++m) CHECK(std::abs(ref.freq(n, m) - d[m]) < 1e-12);
    }
  }
}

TEST_CASE("virtual cyclic prefix") {
  SUBCASE("adds the following samples onto the head") {
    CVec x = ramp(12);
    const SegmentationParams seg{8, 2, 0};
    const auto v = add_vcp(segment(x, seg), x, seg);
    CHECK(v.vcp_applied);
    CHECK(v.rows(0, 0) == 0.0 + 8.0);
    CHECK(v.rows(0, 1) == 1.0 + 9.0);
    for (std::size_t l = 2; l < 8; ++l) CHECK(v.rows(0, l) == static_cast<double>(l));
    CHECK_THROWS_AS(add_vcp(v, x, seg), std::invalid_argument);
    CHECK_THROWS_AS(add_vcp(segment(x, seg), CVec(9), seg), std::invalid_argument);
  }
  SUBCASE("zero tail leaves rows unchanged") {
    CVec x = ramp(10);
    for (std::size_t i = 8; i < 10; ++i) x[i] = 0.0;
    const SegmentationParams seg{8, 2, 0};
    CHECK(add_vcp(segment(x, seg), x, seg).rows == segment(x, seg).rows);
  }
  SUBCASE("an integer-delay echo becomes a cyclic shift outside the first Q~ samples") {
    waveform::SystemParams p;
    std::mt19937_64 g(2);
    const CVec tx = oracle::gaussian_vector(3000, g);
    const std::size_t d = 9;
    const cplx alpha{0.4, -0.7};
    const channel::TargetSet t{{{std::norm(alpha), d * kSpeedOfLight / (2.0 * p.bandwidth), 0.0, alpha}}};
    const CVec rx = channel::synthesize_echo_critical(tx, t, p);
    const SegmentationParams seg{200, 16, 40};
    const auto v = add_vcp(segment(rx, seg), rx, seg).rows;
    const auto s = segment(tx, seg).rows;
    for (std::size_t n = 0; n < v.rows(); ++n)
      for (std::size_t l = seg.q_tilde; l < seg.m_tilde; ++l)
        CHECK(std::abs(v(n, l) - alpha * s(n, (l + seg.m_tilde - d) % seg.m_tilde)) < 1e-12);
  }
}

TEST_CASE("sub-block DFT") {
  std::mt19937_64 g(3);
  SubBlockSet b{oracle::gaussian_matrix(6, 64, g), false};
  const CMatrix x = subblock_dft(b);
  for (std::size_t n = 0; n < 6; ++n) CHECK(energy(x.row(n)) == doctest::Approx(energy(b.rows.row(n))).epsilon(1e-12));
  SubBlockSet delta{CMatrix(1, 16), false};
  delta.rows(0, 0) = 1.0;
  const CMatrix flat = subblock_dft(delta);
  for (auto v : flat.flat()) CHECK(std::abs(v - cplx(0.25)) < 1e-15);

  SUBCASE("VCP'd white noise has power (1 + Q~/M~) sigma_w2") {
    const SegmentationParams seg{512, 128, 150};
    const CVec w = oracle::gaussian_vector(91520, g, 0.2);
    const CMatrix xw = subblock_dft(add_vcp(segment(w, seg), w, seg));
    REQUIRE(xw.size() >= 100000);
    CHECK(energy(xw.flat()) / double(xw.size()) == doctest::Approx(0.2 * (1.0 + 128.0 / 512.0)).epsilon(0.02));
  }
}

TEST_CASE("ratio map") {
  const SegmentationParams seg{64, 8, 16};
  std::mt19937_64 g(4);
  SUBCASE("X = S without masking is a scaled delta") {
    const CMatrix s = oracle::gaussian_matrix(10, 64, g);
    std::size_t masked = 99;
    const auto r = rdm_ratio(s, s, 1000.0, seg, 1e-9, &masked);
    CHECK(masked == 0);
    CHECK(r.stride == 48);
    CHECK(r.origin == RdmOrigin::vcp);
    CHECK(std::abs(r.values(0, 0) - cplx(std::sqrt(640.0) / 1000.0)) < 1e-12);
    for (std::size_t i = 1; i < r.values.size(); ++i) CHECK(std::abs(r.values.flat()[i]) < 1e-12);
  }
  SUBCASE("masked fraction follows the exponential law") {
    const CMatrix s = oracle::gaussian_matrix(200, 1000, g, 1.5);
    const double a = 1.2;
    std::size_t masked = 0;
    (void)rdm_ratio(s, s, a, seg, 1e-9, &masked);
    const double expect = 1.0 - std::exp(-1.0 / (a * a * 1.5));
    CHECK(double(masked) / double(s.size()) == doctest::Approx(expect).epsilon(0.02));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(rdm_ratio(CMatrix(2, 64), CMatrix(3, 64), 1.0, seg, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(rdm_ratio(CMatrix(2, 64), CMatrix(2, 64), 0.0, seg, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(rdm_ccc(CMatrix(2, 64), CMatrix(2, 32), seg, 1e-9), std::invalid_argument);
  }
}

TEST_CASE("CCC map") {
  const SegmentationParams seg{64, 8, 16};
  CHECK(energy(rdm_ccc(CMatrix(5, 64), CMatrix(5, 64), seg, 1e-9).values.flat()) == 0.0);
  std::mt19937_64 g(5);
  double peak = 0.0, noise = 0.0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const CMatrix s = oracle::gaussian_matrix(10, 64, g, 2.0);
    peak += rdm_ccc(s, s, seg, 1e-9).values(0, 0).real();
    noise += energy(rdm_ccc(oracle::gaussian_matrix(10, 64, g, 0.5), s, seg, 1e-9).values.flat()) / 640.0;
  }
  CHECK(peak / trials == doctest::Approx(std::sqrt(640.0) * 2.0).epsilon(0.01));
  CHECK(noise / trials == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("end-to-end sensing puts an on-grid target at its bin") {
  waveform::SystemParams p;
  p.n = 16;
  Rng rng(6);
  const CVec tx = waveform::modulate(waveform::draw_data(p, rng), p).samples;
  const SegmentationParams seg{600, 128, 150};
  const std::size_t nt = seg.n_tilde(tx.size());
  const std::size_t d = 40, kp = 3;
  // k_p = N~ (M~ - Q_bar) k~_p
  const double knorm = static_cast<double>(kp) / static_cast<double>(nt * seg.hop());
  const double v = knorm * p.bandwidth * kSpeedOfLight / (2.0 * p.fc);
  channel::TargetSet t{{{1.0, d * kSpeedOfLight / (2.0 * p.bandwidth), v, 1.0}}};
  const CVec rx = channel::synthesize_echo_critical(tx, t, p);
  const auto maps = sense(rx, tx, seg, p);
  CHECK(maps.a == doctest::Approx(analysis::a_critical(1.0, tx.size())));
  CHECK(maps.ratio.values.rows() == nt);
  CHECK(argmax(maps.ratio.values) == kp * 600 + d);
  CHECK(argmax(maps.ccc.values) == kp * 600 + d);
  CHECK(maps.ratio.nearest_bin(t.targets[0].delay_samples(p), t.targets[0].doppler_norm(p)) ==
        std::pair<std::size_t, std::size_t>{kp, d});
  CHECK_THROWS_AS(sense(CVec(tx.size() - 1), tx, seg, p), std::invalid_argument);
  CHECK(sense(rx, tx, seg, p, 5.0).a == 5.0);
}
