#pragma once

#include <string>
#include <variant>
#include <vector>

#include "teak/signal.hpp"

namespace teak {

/// f^n(t) = exp(-n t / tau) for t >= 0, 0 for t < 0.
struct DampedExpFamily {
  double tau = 1.0;
};

/// f^n(t) = exp(-n t^d) for t >= 0, 0 for t < 0.
struct PowerExpFamily {
  int d = 1;
};

using Family = std::variant<DampedExpFamily, PowerExpFamily>;

void validate(const Family& f);
std::string family_name(const Family& f);

/// Scalar evaluation of the n-th member at time t (causal: 0 for t < 0).
double family_value(const Family& f, int n, double t);

/// Closed-form derivative d^order/dt^order f^n at t (causal: 0 for t < 0).
/// Damped exponential: (-n/tau)^order exp(-n t/tau). The power-exponential
/// derivative carries a polynomial factor built by the recurrence
/// P_{l+1} = P_l' - n d t^{d-1} P_l.
double family_derivative_value(const Family& f, int n, int order, double t);

/// Samples of f^n on the grid, evaluated in closed form.
SampledSignal eval_family(const Family& f, int n, const GridSpec& g);

/// Samples of d^order/dt^order f^n(t - delay) on the grid.
SampledSignal eval_family_derivative(const Family& f, int n, int order,
                                     const GridSpec& g, double delay = 0.0);

/// max_i |d^order f^n(t_i)| over the grid samples.
double family_derivative_sup(const Family& f, int n, int order, const GridSpec& g);

/// (n/2) f^{n-2} Psi_1^+(f) with the exact derivative of the family,
/// i.e. n f^{n-1} f'; equals d/dt f^n in closed form. Requires n > 1.
SampledSignal analytic_lemma0(const Family& f, int n, const GridSpec& g);

}  // namespace teak
