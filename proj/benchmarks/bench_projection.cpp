#include <benchmark/benchmark.h>

#include <vector>

#include "teak/channel.hpp"
#include "teak/projection.hpp"

namespace {

void BM_BuildBasis(benchmark::State& state) {
  const int len = static_cast<int>(state.range(0));
  const teak::GridSpec g{0.0, 4.0 / len, len};
  const teak::BasisSpec spec{4, {2, 3}, {0.0, 32 * g.dt}, teak::Family{teak::PowerExpFamily{2}}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(teak::build_basis(spec, g));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildBasis)->RangeMultiplier(4)->Range(512, 8192)->Complexity();

void BM_SolveProjection(benchmark::State& state) {
  const int len = static_cast<int>(state.range(0));
  const teak::GridSpec g{0.0, 4.0 / len, len};
  const teak::Family fam{teak::PowerExpFamily{2}};
  const teak::BasisSpec spec{4, {2, 3}, {0.0, 32 * g.dt}, fam};
  const teak::DesignMatrix dm = teak::build_basis(spec, g);
  const std::vector<teak::DerivativeTap> taps{{0, 0.0, {1.5, 0.0}}, {1, 0.0, {-0.7, 0.0}}};
  const teak::SampledSignal r =
      teak::apply_derivative_channel(fam, std::vector<int>{2}, taps, {0.01, 7}, g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(teak::solve_projection(r, dm, 1e-10));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveProjection)->RangeMultiplier(4)->Range(512, 8192)->Complexity();

void BM_EstimateDelays(benchmark::State& state) {
  const int len = 2048;
  const teak::GridSpec g{0.0, 4.0 / len, len};
  const teak::Family fam{teak::PowerExpFamily{2}};
  const std::vector<teak::DerivativeTap> taps{{0, 40 * g.dt, {1.5, 0.0}},
                                              {1, 40 * g.dt, {-0.7, 0.0}}};
  const teak::SampledSignal r =
      teak::apply_derivative_channel(fam, std::vector<int>{2}, taps, {0.001, 3}, g);
  const int k_sub = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(teak::estimate_delays(r, fam, 2, 1, 0.0, 0.3, k_sub));
  }
}
BENCHMARK(BM_EstimateDelays)->Arg(0)->Arg(2);

void BM_SalehValenzuela(benchmark::State& state) {
  teak::SalehValenzuelaParams p;
  p.seed = 11;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    p.seed = seed++;
    benchmark::DoNotOptimize(teak::gen_saleh_valenzuela(p));
  }
}
BENCHMARK(BM_SalehValenzuela);

}  // namespace
