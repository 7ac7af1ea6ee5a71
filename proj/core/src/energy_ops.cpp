#include "teak/energy_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace teak {

void validate(const OperatorIndex& idx) {
  if (idx.k < 1) {
    throw std::invalid_argument("operator index: k must be >= 1");
  }
  if (idx.k > kMaxDerivativeOrder) {
    throw std::invalid_argument("operator index: k exceeds max derivative order");
  }
}

SampledSignal apply_psi(const SampledSignal& s, OperatorIndex idx,
                        const DerivativeMethod& m) {
  validate(s);
  validate(idx);
  const SampledSignal d1 = differentiate(s, 1, m);
  const SampledSignal dk1 = differentiate(s, idx.k - 1, m);
  const SampledSignal dk = differentiate(s, idx.k, m);
  const SampledSignal left = pointwise_mul(d1, dk1);
  const SampledSignal right = pointwise_mul(s, dk);
  return idx.sign == OperatorSign::Plus ? add(left, right) : sub(left, right);
}

double psi_derivative_identity_residual(const SampledSignal& s, int k,
                                        OperatorSign sign,
                                        const DerivativeMethod& m) {
  if (k < 2) {
    throw std::invalid_argument("identity residual: k must be >= 2");
  }
  const SampledSignal lhs = differentiate(apply_psi(s, {k, sign}, m), 1, m);
  const SampledSignal t1 = apply_psi(s, {k + 1, sign}, m);
  const SampledSignal t2 = apply_psi(differentiate(s, 1, m), {k - 1, sign}, m);
  return max_abs_interior(sub(sub(lhs, t1), t2));
}

SampledSignal lemma0_decomposition(const SampledSignal& f, int n,
                                   const DerivativeMethod& m) {
  if (n <= 1) {
    throw std::invalid_argument("lemma0_decomposition: n must be > 1");
  }
  const SampledSignal psi1p = apply_psi(f, {1, OperatorSign::Plus}, m);
  const SampledSignal fp = pow_int(f, n - 2);
  return scale(pointwise_mul(fp, psi1p), cplx{0.5 * n, 0.0});
}

}  // namespace teak
