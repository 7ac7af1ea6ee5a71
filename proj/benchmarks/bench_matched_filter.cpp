#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "teak/channel.hpp"
#include "teak/matched_filter.hpp"

namespace {

teak::NoiseCovariance ar1(int dim) {
  Eigen::MatrixXcd r(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) r(i, j) = std::pow(0.5, std::abs(i - j));
  }
  return teak::NoiseCovariance::dense(std::move(r));
}

void BM_SnrQuadraticDense(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const teak::GridSpec g{0.0, 4.0 / dim, dim};
  const teak::TemplateVector f = teak::template_vector(teak::DampedExpFamily{1.0}, 2, g);
  const teak::NoiseCovariance cov = ar1(dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(teak::snr_quadratic(f, cov));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SnrQuadraticDense)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_SnrSubchannel(benchmark::State& state) {
  const int dim = 1024;
  const teak::GridSpec g{0.0, 8.0 / dim, dim};
  const teak::NoiseCovariance cov = teak::NoiseCovariance::diagonal(0.1, dim);
  const std::vector<int> n_set{2, 3, 4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        teak::snr_subchannel(teak::DampedExpFamily{1.0}, n_set, g, cov));
  }
}
BENCHMARK(BM_SnrSubchannel);

void BM_EstimateNoiseCovDense(benchmark::State& state) {
  const int dim = 128;
  std::vector<teak::SampledSignal> reals;
  for (int i = 0; i < 256; ++i) {
    reals.push_back(teak::gen_awgn({0.0, 1.0, dim}, {1.0, static_cast<std::uint64_t>(i)},
                                   teak::NoiseKind::Complex));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(teak::estimate_noise_cov(reals, teak::CovarianceForm::Dense));
  }
}
BENCHMARK(BM_EstimateNoiseCovDense);

}  // namespace
