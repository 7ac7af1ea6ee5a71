#pragma once

#include <span>
#include <vector>

#include "teak/differentiation.hpp"
#include "teak/families.hpp"
#include "teak/signal.hpp"

namespace teak {

struct MembershipTolerances {
  double epsilon_rel = 1e-8;  // "negligible derivative" threshold, relative to sup|f^n|
  double taylor_tol = 1e-6;   // max relative Taylor reconstruction error
};

struct L0Result {
  int l0 = 0;
  bool saturated = false;  // no order below the cap had negligible tail
};

/// Executable record of the membership checks for one template signal.
struct MembershipReport {
  L0Result l0;
  std::vector<double> sup_norms;  // sup|d^l f^n| for l = 0 .. l0+1
  double energy = 0.0;
  double taylor_max_rel_error = 0.0;
  double summability_max = 0.0;    // max_t |sum_{l<=l0} d^l f^n(t)|
  double summability_bound = 0.0;  // l0 * max_{l<l0} sup_norms[l]
  struct Passes {
    bool derivative_decay = false;
    bool summability = false;
    bool taylor_convergence = false;
    bool energy_monotone = false;
  } passes;
  bool all_passed() const {
    return passes.derivative_decay && passes.summability &&
           passes.taylor_convergence && passes.energy_monotone;
  }
};

/// Trapezoidal quadrature of |s(t)|^2 over the grid span. Zero iff s == 0.
double energy(const SampledSignal& s);

/// Cumulative trapezoid sums E(t0..t_i); nondecreasing, last entry == energy(s).
std::vector<double> energy_partial_sums(const SampledSignal& s);

/// Threshold scan over a sup-norm-per-order sequence (orders 0..cap):
/// smallest l0 with sup_norms[l] <= epsilon_rel * sup_norms[0] for every
/// l in (l0, cap]; saturated (l0 = cap) when even the cap order is large.
L0Result detect_l0_from_sups(std::span<const double> sup_norms, double epsilon_rel);

/// Analytic sup norms on the grid for the built-in families.
L0Result detect_l0(const Family& f, int n, const GridSpec& g, double epsilon_rel);

/// Numeric fallback for arbitrary sampled signals. Derivative sup norms below
/// the stencil's rounding floor are treated as zero.
L0Result detect_l0(const SampledSignal& s, double epsilon_rel,
                   const DerivativeMethod& m = {});

MembershipReport check_membership(const Family& f, int n, const GridSpec& g,
                                  const MembershipTolerances& tol = {});
MembershipReport check_membership(const SampledSignal& s,
                                  const MembershipTolerances& tol = {},
                                  const DerivativeMethod& m = {});

}  // namespace teak
