#include "teak/signal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace teak {

namespace {

// Relative tolerance for grid metadata comparisons. Sample counts must match
// exactly; t0/dt are compared loosely so a textual round trip stays compatible.
constexpr double kGridTol = 1e-12;

bool close(double a, double b, double scale) {
  return std::abs(a - b) <= kGridTol * std::max(1.0, std::abs(scale));
}

}  // namespace

void validate(const GridSpec& g) {
  if (!(g.dt > 0.0) || !std::isfinite(g.dt)) {
    throw std::invalid_argument("grid: dt must be finite and > 0");
  }
  if (!std::isfinite(g.t0)) {
    throw std::invalid_argument("grid: t0 must be finite");
  }
  if (g.len < 2) {
    throw std::invalid_argument("grid: need at least 2 samples");
  }
}

double grid_span(const GridSpec& g) { return g.dt * static_cast<double>(g.len - 1); }

SampledSignal make_signal(double t0, double dt, std::vector<cplx> samples,
                          int boundary_guard) {
  SampledSignal s{t0, dt, std::move(samples), boundary_guard};
  validate(s);
  return s;
}

SampledSignal zeros(const GridSpec& g) {
  validate(g);
  return {g.t0, g.dt, std::vector<cplx>(static_cast<std::size_t>(g.len)), 0};
}

SampledSignal zeros_like(const SampledSignal& s) {
  return {s.t0, s.dt, std::vector<cplx>(s.size()), 0};
}

void validate(const SampledSignal& s) {
  if (!(s.dt > 0.0) || !std::isfinite(s.dt)) {
    throw std::invalid_argument("signal: dt must be finite and > 0");
  }
  if (s.samples.size() < 2) {
    throw std::invalid_argument("signal: need at least 2 samples");
  }
  if (!std::isfinite(s.t0)) {
    throw std::invalid_argument("signal: t0 must be finite");
  }
  for (const cplx& v : s.samples) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("signal: samples must be finite");
    }
  }
}

bool grid_compatible(const GridSpec& a, const GridSpec& b) {
  return a.len == b.len && close(a.t0, b.t0, a.t0) && close(a.dt, b.dt, a.dt);
}

bool grid_compatible(const SampledSignal& a, const SampledSignal& b) {
  return grid_compatible(a.grid(), b.grid());
}

void require_compatible(const SampledSignal& a, const SampledSignal& b) {
  if (!grid_compatible(a, b)) {
    throw std::invalid_argument("signals are not grid-compatible");
  }
}

namespace {

template <typename Op>
SampledSignal binary_op(const SampledSignal& a, const SampledSignal& b, Op op) {
  require_compatible(a, b);
  SampledSignal out = a;
  out.boundary_guard = std::max(a.boundary_guard, b.boundary_guard);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] = op(a.samples[i], b.samples[i]);
  }
  return out;
}

}  // namespace

SampledSignal pointwise_mul(const SampledSignal& a, const SampledSignal& b) {
  return binary_op(a, b, [](cplx x, cplx y) { return x * y; });
}

SampledSignal add(const SampledSignal& a, const SampledSignal& b) {
  return binary_op(a, b, [](cplx x, cplx y) { return x + y; });
}

SampledSignal sub(const SampledSignal& a, const SampledSignal& b) {
  return binary_op(a, b, [](cplx x, cplx y) { return x - y; });
}

SampledSignal scale(const SampledSignal& a, cplx factor) {
  SampledSignal out = a;
  for (cplx& v : out.samples) v *= factor;
  return out;
}

SampledSignal pow_int(const SampledSignal& a, int n) {
  if (n < 0) throw std::invalid_argument("pow_int: exponent must be >= 0");
  SampledSignal out = a;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    cplx acc{1.0, 0.0};
    for (int j = 0; j < n; ++j) acc *= a.samples[i];
    out.samples[i] = acc;
  }
  return out;
}

double max_abs(const SampledSignal& s) {
  double m = 0.0;
  for (const cplx& v : s.samples) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_interior(const SampledSignal& s) {
  const std::size_t n = s.samples.size();
  const std::size_t g = static_cast<std::size_t>(std::max(s.boundary_guard, 0));
  if (2 * g >= n) return max_abs(s);
  double m = 0.0;
  for (std::size_t i = g; i < n - g; ++i) m = std::max(m, std::abs(s.samples[i]));
  return m;
}

double norm2(const SampledSignal& s) {
  double acc = 0.0;
  for (const cplx& v : s.samples) acc += std::norm(v);
  return std::sqrt(acc);
}

bool is_real(const SampledSignal& s, double tol) {
  for (const cplx& v : s.samples) {
    if (std::abs(v.imag()) > tol) return false;
  }
  return true;
}

std::int64_t ulp_distance(double a, double b) {
  if (a == b) return 0;
  if (!std::isfinite(a) || !std::isfinite(b)) {
    return std::numeric_limits<std::int64_t>::max();
  }
  // Map to a monotone integer line so adjacent doubles differ by 1.
  auto key = [](double x) -> std::int64_t {
    auto bits = std::bit_cast<std::int64_t>(x);
    return bits >= 0 ? bits : std::numeric_limits<std::int64_t>::min() - bits;
  };
  const __int128 d = static_cast<__int128>(key(a)) - static_cast<__int128>(key(b));
  const __int128 mag = d < 0 ? -d : d;
  const __int128 cap = std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(mag > cap ? cap : mag);
}

std::int64_t ulp_distance(cplx a, cplx b) {
  return std::max(ulp_distance(a.real(), b.real()),
                  ulp_distance(a.imag(), b.imag()));
}

}  // namespace teak
