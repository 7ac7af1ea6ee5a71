#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "teak/signal.hpp"

namespace teak {

/// Seeded generator with explicit, portable draw algorithms (Box-Muller on
/// top of mt19937_64); identical seeds give identical sample paths on any
/// conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Two independent standard normals from one Box-Muller pair.
  std::pair<double, double> gaussian_pair() {
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    const double a = 2.0 * M_PI * uniform01();
    return {r * std::cos(a), r * std::sin(a)};
  }

  double gaussian() { return gaussian_pair().first; }

  /// Circularly symmetric complex normal with E|z|^2 = sigma2.
  cplx circular_gaussian(double sigma2) {
    const auto [x, y] = gaussian_pair();
    const double s = std::sqrt(0.5 * sigma2);
    return {s * x, s * y};
  }

  /// Exponential inter-arrival time with the given rate.
  double exponential(double rate) { return -std::log(uniform01()) / rate; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace teak
