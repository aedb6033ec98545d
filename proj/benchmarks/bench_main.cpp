#include <benchmark/benchmark.h>

#include <vector>

#include "ciprec/analog.hpp"
#include "ciprec/baseline.hpp"
#include "ciprec/channel.hpp"
#include "ciprec/ciprecode.hpp"
#include "ciprec/constellation.hpp"
#include "ciprec/rng.hpp"
#include "ciprec/simulate.hpp"

namespace {

using namespace ciprec;

struct Setup {
  ChannelRealization channel;
  AnalogPrecoder f_rf;
  CMat h_eff;
  std::vector<cplx> symbols;
};

Setup make_setup(std::size_t nt, std::size_t k, std::size_t n_rf) {
  CounterRng rng(1, {StreamTag::kChannel, 0, 0});
  Setup s{draw_channel(k, nt, rng), {}, {}, random_symbols(k, 4, 7)};
  s.f_rf = build_svd_precoder(s.channel, n_rf, 3);
  s.h_eff = equivalent_channel(s.channel, s.f_rf);
  return s;
}

void BM_SvdPrecoder(benchmark::State& state) {
  const auto n_rf = static_cast<std::size_t>(state.range(0));
  CounterRng rng(1, {StreamTag::kChannel, 0, 0});
  const ChannelRealization ch = draw_channel(4, 128, rng);
  for (auto _ : state) benchmark::DoNotOptimize(build_svd_precoder(ch, n_rf, 3));
}
BENCHMARK(BM_SvdPrecoder)->Arg(8)->Arg(32)->Arg(128);

void BM_CiRelaxedLp(benchmark::State& state) {
  const Setup s = make_setup(128, 4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_relaxed(s.h_eff, s.symbols, 4));
}
BENCHMARK(BM_CiRelaxedLp)->Arg(8)->Arg(32)->Arg(128);

void BM_ZfOneBit(benchmark::State& state) {
  const Setup s = make_setup(128, 4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(zf_hybrid_1bit(s.h_eff, s.symbols));
}
BENCHMARK(BM_ZfOneBit)->Arg(8)->Arg(32)->Arg(128);

void BM_SlotChain(benchmark::State& state) {
  const Setup s = make_setup(128, 4, 32);
  const TransmitPath path = TransmitPath::hybrid(s.channel, s.f_rf);
  const auto x = ci_precode_one_bit(s.h_eff, s.symbols, 4).x_bb;
  double f = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(path.noiseless(x, 1.0, f));
}
BENCHMARK(BM_SlotChain);

void BM_RunBerSmall(benchmark::State& state) {
  SimConfig c;
  c.nt = 64;
  c.n_rf = 16;
  c.snr_db_points = {0.0};
  c.symbols_per_channel = 10;
  c.channel_realizations = 10;
  for (auto _ : state) benchmark::DoNotOptimize(run_ber(c));
}
BENCHMARK(BM_RunBerSmall)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
