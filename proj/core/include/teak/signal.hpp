#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace teak {

using cplx = std::complex<double>;

/// Uniform sampling grid: len samples at t0, t0+dt, ..., t0+(len-1)*dt.
struct GridSpec {
  double t0 = 0.0;
  double dt = 1.0;
  int len = 0;
};

void validate(const GridSpec& g);
double grid_span(const GridSpec& g);

/// Uniformly sampled, possibly complex-valued time series.
///
/// `boundary_guard` counts samples at each end whose values are polluted by
/// one-sided stencils; interior norms skip them. Binary operations require
/// grid compatibility (same t0, dt, length) and propagate the larger guard.
struct SampledSignal {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<cplx> samples;
  int boundary_guard = 0;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t i) const { return t0 + dt * static_cast<double>(i); }
  GridSpec grid() const { return {t0, dt, static_cast<int>(samples.size())}; }
};

SampledSignal make_signal(double t0, double dt, std::vector<cplx> samples,
                          int boundary_guard = 0);
SampledSignal zeros(const GridSpec& g);
SampledSignal zeros_like(const SampledSignal& s);

/// Throws std::invalid_argument on dt <= 0, fewer than 2 samples, or
/// non-finite sample values.
void validate(const SampledSignal& s);

bool grid_compatible(const SampledSignal& a, const SampledSignal& b);
bool grid_compatible(const GridSpec& a, const GridSpec& b);
void require_compatible(const SampledSignal& a, const SampledSignal& b);

SampledSignal pointwise_mul(const SampledSignal& a, const SampledSignal& b);
SampledSignal add(const SampledSignal& a, const SampledSignal& b);
SampledSignal sub(const SampledSignal& a, const SampledSignal& b);
SampledSignal scale(const SampledSignal& a, cplx factor);
/// Elementwise integer power by repeated multiplication; n >= 0.
SampledSignal pow_int(const SampledSignal& a, int n);

double max_abs(const SampledSignal& s);
/// Max |s_i| over samples outside the boundary guard at both ends.
double max_abs_interior(const SampledSignal& s);
/// sqrt(sum |s_i|^2), accumulated in increasing index order.
double norm2(const SampledSignal& s);
bool is_real(const SampledSignal& s, double tol = 0.0);

/// Number of representable doubles strictly between a and b (0 if a == b).
std::int64_t ulp_distance(double a, double b);
std::int64_t ulp_distance(cplx a, cplx b);

}  // namespace teak
