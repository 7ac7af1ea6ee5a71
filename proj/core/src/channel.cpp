#include "teak/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "teak/differentiation.hpp"
#include "teak/rng.hpp"

namespace teak {

namespace {

constexpr int kSincHalf = 8;  // 16-tap windowed-sinc fractional delay

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

double blackman(double x) {
  // Window support |x| <= kSincHalf.
  const double u = x / static_cast<double>(kSincHalf);
  if (std::abs(u) > 1.0) return 0.0;
  return 0.42 + 0.5 * std::cos(M_PI * u) + 0.08 * std::cos(2.0 * M_PI * u);
}

void check_delay(double delay, const GridSpec& g, const char* who) {
  if (!(delay >= 0.0) || !std::isfinite(delay)) {
    throw std::invalid_argument(std::string(who) + ": delay must be finite and >= 0");
  }
  if (delay > grid_span(g)) {
    throw std::invalid_argument(std::string(who) + ": delay exceeds the grid span");
  }
}

bool taps_real(std::span<const ClassicalTap> taps) {
  for (const auto& t : taps) {
    if (std::sin(t.phase) != 0.0) return false;
  }
  return true;
}

bool taps_real(std::span<const DerivativeTap> taps) {
  for (const auto& t : taps) {
    if (t.gain.imag() != 0.0) return false;
  }
  return true;
}

}  // namespace

void validate(std::span<const ClassicalTap> taps, const GridSpec& g) {
  for (const auto& t : taps) {
    if (!(t.amplitude >= 0.0) || !std::isfinite(t.amplitude)) {
      throw std::invalid_argument("classical tap: amplitude must be finite and >= 0");
    }
    if (!std::isfinite(t.phase)) {
      throw std::invalid_argument("classical tap: phase must be finite");
    }
    check_delay(t.delay, g, "classical tap");
  }
}

void validate(std::span<const DerivativeTap> taps, const GridSpec& g) {
  for (const auto& t : taps) {
    if (t.order < 0 || t.order > kMaxDerivativeOrder) {
      throw std::invalid_argument("derivative tap: order must be in [0, 12]");
    }
    if (!std::isfinite(t.gain.real()) || !std::isfinite(t.gain.imag())) {
      throw std::invalid_argument("derivative tap: gain must be finite");
    }
    check_delay(t.delay, g, "derivative tap");
  }
}

void validate(const SalehValenzuelaParams& p) {
  auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!pos(p.cluster_rate) || !pos(p.ray_rate) || !pos(p.cluster_decay) ||
      !pos(p.ray_decay) || !pos(p.max_delay)) {
    throw std::invalid_argument("saleh-valenzuela: rates, decays and max_delay must be > 0");
  }
}

SampledSignal gen_awgn(const GridSpec& g, const NoiseModel& noise, NoiseKind kind) {
  validate(g);
  if (!(noise.sigma2 >= 0.0) || !std::isfinite(noise.sigma2)) {
    throw std::invalid_argument("noise: sigma2 must be finite and >= 0");
  }
  SampledSignal out = zeros(g);
  if (noise.sigma2 == 0.0) return out;

  Rng rng(noise.seed);
  if (kind == NoiseKind::Complex) {
    for (int i = 0; i < g.len; ++i) {
      out.samples[static_cast<std::size_t>(i)] = rng.circular_gaussian(noise.sigma2);
    }
  } else {
    const double sigma = std::sqrt(noise.sigma2);
    // One Box-Muller pair feeds two consecutive samples.
    for (int i = 0; i < g.len; i += 2) {
      const auto [a, b] = rng.gaussian_pair();
      out.samples[static_cast<std::size_t>(i)] = sigma * a;
      if (i + 1 < g.len) out.samples[static_cast<std::size_t>(i + 1)] = sigma * b;
    }
  }
  return out;
}

SampledSignal delay_signal(const SampledSignal& g, double delay) {
  validate(g);
  check_delay(delay, g.grid(), "delay_signal");

  const int len = static_cast<int>(g.size());
  const double d = delay / g.dt;
  const int whole = static_cast<int>(std::llround(d));
  SampledSignal out = zeros_like(g);
  out.boundary_guard = g.boundary_guard;

  if (std::abs(d - static_cast<double>(whole)) <= 1e-9) {
    for (int i = whole; i < len; ++i) {
      out.samples[static_cast<std::size_t>(i)] = g.samples[static_cast<std::size_t>(i - whole)];
    }
    return out;
  }

  const int m = static_cast<int>(std::floor(d));
  const double mu = d - static_cast<double>(m);
  double taps[2 * kSincHalf];
  double tap_sum = 0.0;
  for (int j = -kSincHalf + 1; j <= kSincHalf; ++j) {
    const double x = static_cast<double>(j) - mu;
    const double w = sinc(x) * blackman(x);
    taps[j + kSincHalf - 1] = w;
    tap_sum += w;
  }
  for (double& w : taps) w /= tap_sum;  // unit DC gain

  for (int i = 0; i < len; ++i) {
    cplx acc{0.0, 0.0};
    for (int j = -kSincHalf + 1; j <= kSincHalf; ++j) {
      const int src = i - m - j;
      if (src >= 0 && src < len) {
        acc += taps[j + kSincHalf - 1] * g.samples[static_cast<std::size_t>(src)];
      }
    }
    out.samples[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

SampledSignal apply_classical_channel(const SampledSignal& g,
                                      std::span<const ClassicalTap> taps,
                                      const NoiseModel& noise) {
  validate(g);
  validate(taps, g.grid());

  SampledSignal r = zeros_like(g);
  for (const auto& tap : taps) {
    const cplx gain = tap.amplitude * cplx{std::cos(tap.phase), std::sin(tap.phase)};
    const SampledSignal shifted = delay_signal(g, tap.delay);
    for (std::size_t i = 0; i < r.size(); ++i) {
      r.samples[i] += gain * shifted.samples[i];
    }
  }

  if (noise.sigma2 > 0.0) {
    const NoiseKind kind = (is_real(g) && taps_real(taps)) ? NoiseKind::Real
                                                           : NoiseKind::Complex;
    const SampledSignal eta = gen_awgn(g.grid(), noise, kind);
    for (std::size_t i = 0; i < r.size(); ++i) r.samples[i] += eta.samples[i];
  }
  return r;
}

SampledSignal apply_derivative_channel(const Family& f, std::span<const int> n_set,
                                       std::span<const DerivativeTap> taps,
                                       const NoiseModel& noise, const GridSpec& g) {
  validate(f);
  validate(g);
  validate(taps, g);
  if (n_set.empty()) {
    throw std::invalid_argument("derivative channel: n_set must be nonempty");
  }
  for (int n : n_set) {
    if (n <= 1) throw std::invalid_argument("derivative channel: every n must be > 1");
  }

  SampledSignal r = zeros(g);
  for (int n : n_set) {
    for (const auto& tap : taps) {
      const SampledSignal col = eval_family_derivative(f, n, tap.order, g, tap.delay);
      for (std::size_t i = 0; i < r.size(); ++i) {
        r.samples[i] += tap.gain * col.samples[i];
      }
    }
  }

  if (noise.sigma2 > 0.0) {
    const NoiseKind kind = taps_real(taps) ? NoiseKind::Real : NoiseKind::Complex;
    const SampledSignal eta = gen_awgn(g, noise, kind);
    for (std::size_t i = 0; i < r.size(); ++i) r.samples[i] += eta.samples[i];
  }
  return r;
}

std::vector<ClassicalTap> gen_saleh_valenzuela(const SalehValenzuelaParams& p) {
  validate(p);
  Rng rng(p.seed);
  std::vector<ClassicalTap> taps;

  double cluster_t = 0.0;  // first cluster arrives at t = 0
  while (cluster_t <= p.max_delay) {
    const double cluster_gain = std::exp(-cluster_t / p.cluster_decay);
    double ray_t = 0.0;  // first ray at the cluster arrival
    while (cluster_t + ray_t <= p.max_delay) {
      const double mean_power = cluster_gain * std::exp(-ray_t / p.ray_decay);
      // Rayleigh amplitude with E[a^2] = mean_power.
      const double a = std::sqrt(-mean_power * std::log(rng.uniform01()));
      const double phi = 2.0 * M_PI * rng.uniform01();
      taps.push_back({a, phi, cluster_t + ray_t});
      ray_t += rng.exponential(p.ray_rate);
    }
    cluster_t += rng.exponential(p.cluster_rate);
  }
  return taps;
}

}  // namespace teak
