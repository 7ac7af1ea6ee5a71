#include "teak/signal_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace teak {

double energy(const SampledSignal& s) {
  validate(s);
  const std::vector<double> sums = energy_partial_sums(s);
  return sums.back();
}

std::vector<double> energy_partial_sums(const SampledSignal& s) {
  std::vector<double> sums(s.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    acc += 0.5 * s.dt * (std::norm(s.samples[i - 1]) + std::norm(s.samples[i]));
    sums[i] = acc;
  }
  return sums;
}

L0Result detect_l0_from_sups(std::span<const double> sup_norms, double epsilon_rel) {
  if (!(epsilon_rel > 0.0) || !(epsilon_rel < 1.0)) {
    throw std::invalid_argument("detect_l0: epsilon_rel must be in (0, 1)");
  }
  if (sup_norms.empty()) {
    throw std::invalid_argument("detect_l0: empty sup-norm sequence");
  }
  const int cap = static_cast<int>(sup_norms.size()) - 1;
  const double threshold = epsilon_rel * sup_norms[0];
  if (sup_norms[static_cast<std::size_t>(cap)] > threshold) {
    return {cap, true};
  }
  int l0 = 0;
  for (int l = cap; l >= 1; --l) {
    if (sup_norms[static_cast<std::size_t>(l)] > threshold) {
      l0 = l;
      break;
    }
  }
  return {l0, false};
}

L0Result detect_l0(const Family& f, int n, const GridSpec& g, double epsilon_rel) {
  std::vector<double> sups(static_cast<std::size_t>(kMaxDerivativeOrder) + 1);
  for (int l = 0; l <= kMaxDerivativeOrder; ++l) {
    sups[static_cast<std::size_t>(l)] = family_derivative_sup(f, n, l, g);
  }
  return detect_l0_from_sups(sups, epsilon_rel);
}

L0Result detect_l0(const SampledSignal& s, double epsilon_rel, const DerivativeMethod& m) {
  validate(s);
  std::vector<double> sups;
  sups.push_back(max_abs_interior(s));
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 1; l <= kMaxDerivativeOrder; ++l) {
    double raw = 0.0;
    try {
      raw = max_abs_interior(differentiate(s, l, m));
    } catch (const std::invalid_argument&) {
      break;  // signal too short for this stencil; cap the scan here
    }
    // Rounding floor of an order-l stencil: below it the value is numerically
    // indistinguishable from zero.
    const double floor = 32.0 * eps * max_abs(s) * rounding_amplification(m, l, s.dt);
    sups.push_back(raw <= floor ? 0.0 : raw);
  }
  return detect_l0_from_sups(sups, epsilon_rel);
}

namespace {

bool sums_nondecreasing(const std::vector<double>& sums) {
  for (std::size_t i = 1; i < sums.size(); ++i) {
    if (sums[i] < sums[i - 1]) return false;
  }
  return true;
}

MembershipReport build_report(const std::vector<double>& all_sups, const L0Result& l0r,
                              double taylor_max_rel_error, double summability_max,
                              const std::vector<double>& energy_sums,
                              const MembershipTolerances& tol) {
  MembershipReport rep;
  rep.l0 = l0r;
  const int keep = std::min(l0r.l0 + 2, static_cast<int>(all_sups.size()));
  rep.sup_norms.assign(all_sups.begin(), all_sups.begin() + keep);
  rep.energy = energy_sums.back();
  rep.taylor_max_rel_error = taylor_max_rel_error;
  rep.summability_max = summability_max;

  double max_low = 0.0;
  for (int l = 0; l < std::max(l0r.l0, 1) && l < static_cast<int>(all_sups.size()); ++l) {
    max_low = std::max(max_low, all_sups[static_cast<std::size_t>(l)]);
  }
  rep.summability_bound = std::max(l0r.l0, 1) * max_low;

  rep.passes.derivative_decay = !l0r.saturated;
  rep.passes.summability = std::isfinite(summability_max) &&
                           (l0r.l0 == 0 || summability_max <= rep.summability_bound);
  rep.passes.taylor_convergence = taylor_max_rel_error <= tol.taylor_tol;
  rep.passes.energy_monotone = sums_nondecreasing(energy_sums);
  return rep;
}

}  // namespace

MembershipReport check_membership(const Family& f, int n, const GridSpec& g,
                                  const MembershipTolerances& tol) {
  validate(f);
  validate(g);
  const L0Result l0r = detect_l0(f, n, g, tol.epsilon_rel);

  std::vector<double> sups(static_cast<std::size_t>(kMaxDerivativeOrder) + 2);
  for (int l = 0; l < static_cast<int>(sups.size()); ++l) {
    sups[static_cast<std::size_t>(l)] = family_derivative_sup(f, n, l, g);
  }
  const double sup0 = std::max(sups[0], std::numeric_limits<double>::min());

  // Truncated Taylor reconstruction at grid midpoints, relative to sup|f^n|.
  double taylor_err = 0.0;
  double summ_max = 0.0;
  const double h = 0.5 * g.dt;
  for (int i = 0; i + 1 < g.len; ++i) {
    const double t = g.t0 + g.dt * static_cast<double>(i);
    double pred = 0.0;
    double term_scale = 1.0;  // h^l / l!
    double signed_sum = 0.0;
    for (int l = 0; l <= l0r.l0; ++l) {
      const double dl = family_derivative_value(f, n, l, t);
      pred += dl * term_scale;
      signed_sum += dl;
      term_scale *= h / static_cast<double>(l + 1);
    }
    const double exact = family_value(f, n, t + h);
    taylor_err = std::max(taylor_err, std::abs(pred - exact) / sup0);
    summ_max = std::max(summ_max, std::abs(signed_sum));
  }

  const std::vector<double> sums = energy_partial_sums(eval_family(f, n, g));
  return build_report(sups, l0r, taylor_err, summ_max, sums, tol);
}

MembershipReport check_membership(const SampledSignal& s, const MembershipTolerances& tol,
                                  const DerivativeMethod& m) {
  validate(s);
  const L0Result l0r = detect_l0(s, tol.epsilon_rel, m);

  std::vector<SampledSignal> derivs;
  derivs.reserve(static_cast<std::size_t>(l0r.l0) + 2);
  for (int l = 0; l <= l0r.l0 + 1 && l <= kMaxDerivativeOrder; ++l) {
    try {
      derivs.push_back(differentiate(s, l, m));
    } catch (const std::invalid_argument&) {
      break;
    }
  }
  std::vector<double> sups;
  sups.reserve(derivs.size());
  for (const auto& d : derivs) sups.push_back(max_abs_interior(d));
  const double sup0 = std::max(sups[0], std::numeric_limits<double>::min());

  // On sampled data the reconstruction target is the next sample.
  double taylor_err = 0.0;
  double summ_max = 0.0;
  const std::size_t n = s.size();
  const std::size_t guard = static_cast<std::size_t>(
      std::max(derivs.back().boundary_guard, 0));
  const std::size_t end = n > guard ? n - guard : 0;
  const int max_l = std::min(l0r.l0, static_cast<int>(derivs.size()) - 1);
  for (std::size_t i = guard; i + 1 < end; ++i) {
    cplx pred{0.0, 0.0};
    cplx signed_sum{0.0, 0.0};
    double term_scale = 1.0;
    for (int l = 0; l <= max_l; ++l) {
      const cplx dl = derivs[static_cast<std::size_t>(l)].samples[i];
      pred += dl * term_scale;
      signed_sum += dl;
      term_scale *= s.dt / static_cast<double>(l + 1);
    }
    taylor_err = std::max(taylor_err, std::abs(pred - s.samples[i + 1]) / sup0);
    summ_max = std::max(summ_max, std::abs(signed_sum));
  }

  const std::vector<double> sums = energy_partial_sums(s);
  return build_report(sups, l0r, taylor_err, summ_max, sums, tol);
}

}  // namespace teak
