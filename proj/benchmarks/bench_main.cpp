#include <benchmark/benchmark.h>

#include "isac/channel.hpp"
#include "isac/detector.hpp"
#include "isac/fft.hpp"
#include "isac/sensing_cos.hpp"
#include "isac/sensing_vcp.hpp"
#include "isac/waveform.hpp"

namespace {

using namespace isac;

CVec noise(std::size_t n, std::uint64_t seed) {
  CVec x(n);
  Rng rng(seed);
  channel::add_noise(x, 1.0, rng);
  return x;
}

void BM_Fft(benchmark::State& state) {
  CVec x = noise(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    fft::transform_inplace(x, fft::Direction::forward);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_Fft)->Arg(512)->Arg(600)->Arg(1200)->Arg(4096);

void BM_EchoSynthesis(benchmark::State& state) {
  waveform::SystemParams p{.n = static_cast<std::size_t>(state.range(0))};
  Rng rng(2);
  const auto tx = waveform::modulate(waveform::draw_data(p, rng), p).samples;
  const auto targets = channel::draw_targets({}, p, rng);
  for (auto _ : state) benchmark::DoNotOptimize(channel::synthesize_echo(tx, targets, p));
}
BENCHMARK(BM_EchoSynthesis)->Arg(16)->Arg(143)->Unit(benchmark::kMillisecond);

void BM_VcpSense(benchmark::State& state) {
  waveform::SystemParams p{.n = 16};
  Rng rng(3);
  const auto tx = waveform::modulate(waveform::draw_data(p, rng), p).samples;
  const CVec rx = noise(tx.size(), 4);
  const sensing_vcp::SegmentationParams seg{static_cast<std::size_t>(state.range(0)), 128, 150};
  for (auto _ : state) benchmark::DoNotOptimize(sensing_vcp::sense(rx, tx, seg, p));
}
BENCHMARK(BM_VcpSense)->Arg(600)->Arg(1200)->Unit(benchmark::kMillisecond);

void BM_CosSense(benchmark::State& state) {
  waveform::SystemParams p{.n = 16};
  Rng rng(5);
  const auto grid = waveform::draw_data(p, rng);
  const auto tx = waveform::modulate(grid, p);
  const auto s = waveform::map_dd_to_ft(grid, p);
  for (auto _ : state) {
    const auto x = sensing_cos::cos_demod(tx, p);
    benchmark::DoNotOptimize(sensing_cos::rdm_ccc(x, s, p));
  }
}
BENCHMARK(BM_CosSense)->Unit(benchmark::kMillisecond);

void BM_Cfar(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const CVec flat = noise(rows * 600, 6);
  CMatrix v(rows, 600);
  std::copy(flat.begin(), flat.end(), v.flat().begin());
  const detector::CfarParams params;
  for (auto _ : state) benchmark::DoNotOptimize(detector::cfar_count(v, params));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * v.size()));
}
BENCHMARK(BM_Cfar)->Arg(22)->Arg(252)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
