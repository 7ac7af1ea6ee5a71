#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "teak/families.hpp"
#include "teak/signal.hpp"

namespace teak {

/// One multipath ray: r receives amplitude * e^{j phase} * g(t - delay).
struct ClassicalTap {
  double amplitude = 1.0;
  double phase = 0.0;
  double delay = 0.0;
};

/// One derivative-of-impulse tap: gain * d^order/dt^order applied at delay.
struct DerivativeTap {
  int order = 0;
  double delay = 0.0;
  cplx gain{1.0, 0.0};
};

struct NoiseModel {
  double sigma2 = 0.0;     // per-sample noise power E|eta|^2
  std::uint64_t seed = 0;  // identical seed => identical sample path
};

/// Poisson cluster/ray arrival model with doubly exponential power decay.
/// Defaults are the classic indoor values (rates in 1/s, decays in s).
struct SalehValenzuelaParams {
  double cluster_rate = 1.0 / 300e-9;
  double ray_rate = 1.0 / 5e-9;
  double cluster_decay = 60e-9;
  double ray_decay = 20e-9;
  double max_delay = 300e-9;
  std::uint64_t seed = 0;
};

enum class NoiseKind { Real, Complex };

void validate(std::span<const ClassicalTap> taps, const GridSpec& g);
void validate(std::span<const DerivativeTap> taps, const GridSpec& g);
void validate(const SalehValenzuelaParams& p);

/// Zero-mean Gaussian samples with per-sample variance sigma2. Complex noise
/// is circularly symmetric (variance split between parts).
SampledSignal gen_awgn(const GridSpec& g, const NoiseModel& noise,
                       NoiseKind kind = NoiseKind::Real);

/// g(t - delay) on the same grid: exact sample shift for on-grid delays,
/// 16-tap windowed-sinc interpolation otherwise. Content before the grid
/// start is taken as zero.
SampledSignal delay_signal(const SampledSignal& g, double delay);

/// r = sum_l a_l e^{j phi_l} g(t - tau_l) + eta. Noise is real Gaussian when
/// the signal path is real, circular complex otherwise.
SampledSignal apply_classical_channel(const SampledSignal& g,
                                      std::span<const ClassicalTap> taps,
                                      const NoiseModel& noise);

/// r = sum_{n in n_set} sum_l rho_l d^{l}/dt^{l} f^n(t - tau_l) + eta,
/// with closed-form derivatives of the built-in families.
SampledSignal apply_derivative_channel(const Family& f, std::span<const int> n_set,
                                       std::span<const DerivativeTap> taps,
                                       const NoiseModel& noise, const GridSpec& g);

/// Cluster arrivals at rate cluster_rate (first cluster at t = 0), ray
/// arrivals within each cluster at ray_rate, mean ray power
/// exp(-T_cluster/cluster_decay) * exp(-tau_ray/ray_decay), Rayleigh
/// amplitudes, uniform phases; truncated at max_delay.
std::vector<ClassicalTap> gen_saleh_valenzuela(const SalehValenzuelaParams& p);

}  // namespace teak
