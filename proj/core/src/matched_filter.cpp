#include "teak/matched_filter.hpp"

#include <cmath>
#include <stdexcept>

namespace teak {

namespace {
constexpr double kLoadingFactor = 1e-12;
}

NoiseCovariance NoiseCovariance::diagonal(double sigma2, int dim) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("noise covariance: diagonal sigma2 must be > 0");
  }
  if (dim < 1) throw std::invalid_argument("noise covariance: dim must be >= 1");
  NoiseCovariance c;
  c.form_ = CovarianceForm::Diagonal;
  c.dim_ = dim;
  c.sigma2_ = sigma2;
  return c;
}

NoiseCovariance NoiseCovariance::dense(Eigen::MatrixXcd r) {
  if (r.rows() != r.cols() || r.rows() < 1) {
    throw std::invalid_argument("noise covariance: matrix must be square");
  }
  NoiseCovariance c;
  c.form_ = CovarianceForm::Dense;
  c.dim_ = static_cast<int>(r.rows());
  c.r_ = 0.5 * (r + r.adjoint());  // enforce Hermitian symmetry

  const double trace = c.r_.real().trace();
  double load = kLoadingFactor * (trace > 0.0 ? trace / c.dim_ : 1.0);
  c.llt_.compute(c.r_);
  while (c.llt_.info() != Eigen::Success) {
    c.r_ += load * Eigen::MatrixXcd::Identity(c.dim_, c.dim_);
    c.loaded_ = true;
    load *= 16.0;
    c.llt_.compute(c.r_);
  }
  return c;
}

Eigen::VectorXcd NoiseCovariance::solve(const Eigen::VectorXcd& b) const {
  if (static_cast<int>(b.size()) != dim_) {
    throw std::invalid_argument("noise covariance: dimension mismatch");
  }
  if (form_ == CovarianceForm::Diagonal) return b / sigma2_;
  return llt_.solve(b);
}

double NoiseCovariance::quad_form(const Eigen::VectorXcd& h) const {
  if (static_cast<int>(h.size()) != dim_) {
    throw std::invalid_argument("noise covariance: dimension mismatch");
  }
  if (form_ == CovarianceForm::Diagonal) return sigma2_ * h.squaredNorm();
  return (h.dot(r_ * h)).real();
}

double NoiseCovariance::quad_inverse(const Eigen::VectorXcd& f) const {
  if (static_cast<int>(f.size()) != dim_) {
    throw std::invalid_argument("noise covariance: dimension mismatch");
  }
  if (form_ == CovarianceForm::Diagonal) return f.squaredNorm() / sigma2_;
  const cplx q = f.dot(llt_.solve(f));
  return std::max(q.real(), 0.0);
}

NoiseCovariance estimate_noise_cov(std::span<const SampledSignal> realizations,
                                   CovarianceForm form) {
  if (realizations.empty()) {
    throw std::invalid_argument("estimate_noise_cov: need at least one realization");
  }
  const int dim = static_cast<int>(realizations.front().size());
  for (const auto& s : realizations) {
    validate(s);
    if (static_cast<int>(s.size()) != dim) {
      throw std::invalid_argument("estimate_noise_cov: realizations differ in length");
    }
  }
  const double m = static_cast<double>(realizations.size());

  if (form == CovarianceForm::Diagonal) {
    double acc = 0.0;
    for (const auto& s : realizations) {
      for (const auto& v : s.samples) acc += std::norm(v);
    }
    const double sigma2 = acc / (m * static_cast<double>(dim));
    if (sigma2 > 0.0) return NoiseCovariance::diagonal(sigma2, dim);
    // All-zero input: fall back to a loaded identity and flag it.
    NoiseCovariance c = NoiseCovariance::dense(Eigen::MatrixXcd::Zero(dim, dim));
    return c;
  }

  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& s : realizations) {
    const Eigen::Map<const Eigen::VectorXcd> v(s.samples.data(), dim);
    r.noalias() += v * v.adjoint();
  }
  r /= m;
  return NoiseCovariance::dense(std::move(r));
}

TemplateVector template_vector(const Family& f, int n, const GridSpec& g) {
  if (n < 1) throw std::invalid_argument("template_vector: n must be >= 1");
  const SampledSignal base = eval_family(f, 1, g);
  TemplateVector t;
  t.entries.resize(g.len);
  for (int i = 0; i < g.len; ++i) {
    cplx acc{1.0, 0.0};
    for (int j = 0; j < n; ++j) acc *= base.samples[static_cast<std::size_t>(i)];
    t.entries[i] = acc;
  }
  t.provenance = family_name(f) + ", n=" + std::to_string(n);
  return t;
}

double snr_ratio(const FilterVector& h, const TemplateVector& f,
                 const NoiseCovariance& r) {
  if (h.entries.size() != f.entries.size()) {
    throw std::invalid_argument("snr_ratio: dimension mismatch");
  }
  if (h.entries.squaredNorm() == 0.0) {
    throw std::invalid_argument("snr_ratio: filter must be nonzero");
  }
  const double num = std::norm(h.entries.dot(f.entries));
  const double den = r.quad_form(h.entries);
  if (!(den > 0.0)) {
    throw std::invalid_argument("snr_ratio: covariance is not positive definite on h");
  }
  return num / den;
}

double snr_quadratic(const TemplateVector& f, const NoiseCovariance& r) {
  return r.quad_inverse(f.entries);
}

SnrReport snr_subchannel(const Family& f, std::span<const int> n_set,
                         const GridSpec& g, const NoiseCovariance& r) {
  validate(f);
  validate(g);
  if (n_set.empty()) {
    throw std::invalid_argument("snr_subchannel: n_set must be nonempty");
  }
  if (r.dim() != g.len) {
    throw std::invalid_argument("snr_subchannel: covariance dimension must match grid");
  }
  SnrReport rep;
  rep.noise_form = r.form() == CovarianceForm::Diagonal ? "diagonal" : "dense";
  rep.loading_applied = r.loading_applied();
  double total = 0.0;
  for (int n : n_set) {
    const TemplateVector fn = template_vector(f, n, g);
    const double snr_n = snr_quadratic(fn, r);
    rep.per_n[n] = snr_n;
    // Stacked template under block-diagonal noise: the quadratic form is
    // additive across subchannels.
    total += snr_n;
  }
  rep.snr_total = total;
  return rep;
}

cplx matched_filter_output(const SampledSignal& r, const TemplateVector& f,
                           const NoiseCovariance& cov) {
  validate(r);
  if (static_cast<int>(r.size()) != static_cast<int>(f.entries.size())) {
    throw std::invalid_argument("matched_filter_output: dimension mismatch");
  }
  const Eigen::Map<const Eigen::VectorXcd> rv(r.samples.data(),
                                              static_cast<Eigen::Index>(r.size()));
  const Eigen::VectorXcd w = cov.solve(f.entries);
  return w.dot(rv);
}

}  // namespace teak
