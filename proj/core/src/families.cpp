#include "teak/families.hpp"

#include <cmath>
#include <stdexcept>

#include "teak/differentiation.hpp"

namespace teak {

namespace {

void check_member(int n) {
  if (n < 1) throw std::invalid_argument("family: member index n must be >= 1");
}

void check_order(int order) {
  if (order < 0 || order > kMaxDerivativeOrder + 2) {
    throw std::invalid_argument("family: unsupported derivative order");
  }
}

// Coefficients (ascending powers) of the polynomial factor in
// d^order/dt^order exp(-n t^d).
std::vector<double> power_exp_poly(int n, int d, int order) {
  std::vector<double> p{1.0};
  const double a = -static_cast<double>(n) * static_cast<double>(d);
  for (int l = 0; l < order; ++l) {
    std::vector<double> next(p.size() + static_cast<std::size_t>(d) - 1, 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) {
      next[i - 1] += static_cast<double>(i) * p[i];
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      next[i + static_cast<std::size_t>(d) - 1] += a * p[i];
    }
    p = std::move(next);
  }
  return p;
}

double horner(const std::vector<double>& p, double t) {
  double acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * t + p[i];
  return acc;
}

}  // namespace

void validate(const Family& f) {
  if (const auto* de = std::get_if<DampedExpFamily>(&f)) {
    if (!(de->tau > 0.0) || !std::isfinite(de->tau)) {
      throw std::invalid_argument("damped_exp family: tau must be finite and > 0");
    }
  } else {
    const auto& pe = std::get<PowerExpFamily>(f);
    if (pe.d < 1) {
      throw std::invalid_argument("power_exp family: d must be >= 1");
    }
  }
}

std::string family_name(const Family& f) {
  if (const auto* de = std::get_if<DampedExpFamily>(&f)) {
    return "damped_exp(tau=" + std::to_string(de->tau) + ")";
  }
  return "power_exp(d=" + std::to_string(std::get<PowerExpFamily>(f).d) + ")";
}

double family_value(const Family& f, int n, double t) {
  check_member(n);
  if (t < 0.0) return 0.0;
  // n-th power of the base member, so f^n agrees bit-for-bit with the
  // elementwise power of the sampled base template.
  double base = 0.0;
  if (const auto* de = std::get_if<DampedExpFamily>(&f)) {
    base = std::exp(-t / de->tau);
  } else {
    const int d = std::get<PowerExpFamily>(f).d;
    base = std::exp(-std::pow(t, d));
  }
  double acc = 1.0;
  for (int j = 0; j < n; ++j) acc *= base;
  return acc;
}

double family_derivative_value(const Family& f, int n, int order, double t) {
  check_member(n);
  check_order(order);
  if (t < 0.0) return 0.0;
  if (order == 0) return family_value(f, n, t);
  if (const auto* de = std::get_if<DampedExpFamily>(&f)) {
    const double rate = static_cast<double>(n) / de->tau;
    const double mag = std::pow(rate, order);
    const double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return sign * mag * std::exp(-rate * t);
  }
  const int d = std::get<PowerExpFamily>(f).d;
  const std::vector<double> p = power_exp_poly(n, d, order);
  return horner(p, t) * std::exp(-static_cast<double>(n) * std::pow(t, d));
}

SampledSignal eval_family(const Family& f, int n, const GridSpec& g) {
  return eval_family_derivative(f, n, 0, g, 0.0);
}

SampledSignal eval_family_derivative(const Family& f, int n, int order,
                                     const GridSpec& g, double delay) {
  validate(f);
  validate(g);
  check_member(n);
  check_order(order);
  if (g.t0 < 0.0) throw std::invalid_argument("family evaluation: grid t0 must be >= 0");
  SampledSignal out = zeros(g);

  // Power-exponential derivatives share one polynomial per column; building
  // it per sample would dominate basis assembly.
  if (order > 0) {
    if (const auto* pe = std::get_if<PowerExpFamily>(&f)) {
      const std::vector<double> p = power_exp_poly(n, pe->d, order);
      for (int i = 0; i < g.len; ++i) {
        const double t = g.t0 + g.dt * static_cast<double>(i) - delay;
        if (t < 0.0) continue;
        out.samples[static_cast<std::size_t>(i)] =
            horner(p, t) * std::exp(-static_cast<double>(n) * std::pow(t, pe->d));
      }
      return out;
    }
  }

  for (int i = 0; i < g.len; ++i) {
    const double t = g.t0 + g.dt * static_cast<double>(i) - delay;
    out.samples[static_cast<std::size_t>(i)] = family_derivative_value(f, n, order, t);
  }
  return out;
}

double family_derivative_sup(const Family& f, int n, int order, const GridSpec& g) {
  validate(f);
  validate(g);
  double sup = 0.0;
  for (int i = 0; i < g.len; ++i) {
    const double t = g.t0 + g.dt * static_cast<double>(i);
    sup = std::max(sup, std::abs(family_derivative_value(f, n, order, t)));
  }
  return sup;
}

SampledSignal analytic_lemma0(const Family& f, int n, const GridSpec& g) {
  if (n <= 1) throw std::invalid_argument("analytic_lemma0: n must be > 1");
  validate(f);
  validate(g);
  SampledSignal out = zeros(g);
  for (int i = 0; i < g.len; ++i) {
    const double t = g.t0 + g.dt * static_cast<double>(i);
    const double f1 = family_value(f, 1, t);
    const double df1 = family_derivative_value(f, 1, 1, t);
    const double psi1p = 2.0 * f1 * df1;
    double fpow = 1.0;
    for (int j = 0; j < n - 2; ++j) fpow *= f1;
    out.samples[static_cast<std::size_t>(i)] = 0.5 * n * fpow * psi1p;
  }
  return out;
}

}  // namespace teak
