#pragma once

#include "teak/differentiation.hpp"
#include "teak/signal.hpp"

namespace teak {

enum class OperatorSign { Plus, Minus };

/// Index of one member of the conjugate energy-operator family.
struct OperatorIndex {
  int k = 2;
  OperatorSign sign = OperatorSign::Minus;
};

void validate(const OperatorIndex& idx);

/// Psi_k^±(s) = d/dt s * d^{k-1}/dt^{k-1} s ± s * d^k/dt^k s, pointwise.
///
/// Products are plain elementwise products (no conjugation); the classical
/// Teager-Kaiser operator (df)^2 - f d2f is the k = 2, minus member.
SampledSignal apply_psi(const SampledSignal& s, OperatorIndex idx,
                        const DerivativeMethod& m);

/// Max-norm over interior samples of
///   d/dt Psi_k^±(s) - Psi_{k+1}^±(s) - Psi_{k-1}^±(ds/dt),
/// which vanishes in the continuum. Requires k >= 2.
double psi_derivative_identity_residual(const SampledSignal& s, int k,
                                        OperatorSign sign,
                                        const DerivativeMethod& m);

/// (n/2) * f^{n-2} * Psi_1^+(f), pointwise; equals d/dt(f^n) up to
/// discretization error. Requires n > 1.
SampledSignal lemma0_decomposition(const SampledSignal& f, int n,
                                   const DerivativeMethod& m);

}  // namespace teak
