#pragma once

#include <span>
#include <vector>

#include "teak/signal.hpp"

namespace teak {

inline constexpr int kMaxDerivativeOrder = 12;

enum class DerivativeKind { FiniteDifference, Spectral };

/// Discretization of d^k/dt^k on uniformly sampled data.
///
/// FiniteDifference uses centered stencils of the given (even) accuracy order
/// in the interior and one-sided stencils of the same order at the edges;
/// edge samples are marked boundary-affected on the output. Spectral uses
/// periodic frequency-domain differentiation and is meant for signals whose
/// periodic extension is smooth.
struct DerivativeMethod {
  DerivativeKind kind = DerivativeKind::FiniteDifference;
  int accuracy_order = 8;  // finite-difference only; one of 2, 4, 6, 8

  static DerivativeMethod finite_difference(int accuracy_order = 8) {
    return {DerivativeKind::FiniteDifference, accuracy_order};
  }
  static DerivativeMethod spectral() { return {DerivativeKind::Spectral, 0}; }
};

void validate(const DerivativeMethod& m);

/// Weights w such that sum_j w[j] f(x[j]) approximates f^(m)(z).
/// Nodes must be distinct. Fornberg's recursion, O(n^2) per derivative order.
std::vector<double> fd_weights(double z, std::span<const double> x, int m);

/// Half-width of the centered stencil for the given derivative/accuracy order.
int fd_interior_halfwidth(int order, int accuracy_order);

/// Worst-case rounding amplification of one application: an input perturbed
/// by eps*max|s| moves the interior output by at most eps*max|s| times this
/// factor (stencil l1 norm / dt^order; (pi/dt)^order for spectral).
double rounding_amplification(const DerivativeMethod& m, int order, double dt);

/// order-th derivative of s on the same grid; order 0 returns s unchanged.
SampledSignal differentiate(const SampledSignal& s, int order,
                            const DerivativeMethod& m);

}  // namespace teak
