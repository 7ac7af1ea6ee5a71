#include <benchmark/benchmark.h>

#include <cmath>

#include "teak/energy_ops.hpp"

namespace {

teak::SampledSignal make_signal(int len) {
  teak::SampledSignal s = teak::zeros({0.0, 4.0 / len, len});
  for (int i = 0; i < len; ++i) {
    const double t = s.dt * i;
    s.samples[static_cast<std::size_t>(i)] = std::exp(-t) * std::cos(2 * M_PI * t);
  }
  return s;
}

void BM_DifferentiateFd8(benchmark::State& state) {
  const auto s = make_signal(static_cast<int>(state.range(0)));
  const auto m = teak::DerivativeMethod::finite_difference(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(teak::differentiate(s, 2, m));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DifferentiateFd8)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

void BM_DifferentiateSpectral(benchmark::State& state) {
  const auto s = make_signal(static_cast<int>(state.range(0)));
  const auto m = teak::DerivativeMethod::spectral();
  for (auto _ : state) {
    benchmark::DoNotOptimize(teak::differentiate(s, 2, m));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DifferentiateSpectral)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

void BM_ApplyPsi(benchmark::State& state) {
  const auto s = make_signal(4096);
  const auto m = teak::DerivativeMethod::finite_difference(8);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(teak::apply_psi(s, {k, teak::OperatorSign::Minus}, m));
  }
}
BENCHMARK(BM_ApplyPsi)->Arg(2)->Arg(4)->Arg(8);

}  // namespace
