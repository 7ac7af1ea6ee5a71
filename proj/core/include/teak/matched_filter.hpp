#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>

#include "teak/families.hpp"
#include "teak/signal.hpp"

namespace teak {

enum class CovarianceForm { Diagonal, Dense };

/// Hermitian positive-definite noise covariance. Dense matrices are
/// symmetrized on construction and diagonally loaded (1e-12 * trace/dim)
/// until the Cholesky factorization succeeds; applications of R^{-1} go
/// through the factorization, never an explicit inverse.
class NoiseCovariance {
 public:
  static NoiseCovariance diagonal(double sigma2, int dim);
  static NoiseCovariance dense(Eigen::MatrixXcd r);

  CovarianceForm form() const { return form_; }
  int dim() const { return dim_; }
  double sigma2() const { return sigma2_; }
  bool loading_applied() const { return loaded_; }
  const Eigen::MatrixXcd& matrix() const { return r_; }  // dense form only

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;  // R^{-1} b
  double quad_form(const Eigen::VectorXcd& h) const;        // h^H R h
  double quad_inverse(const Eigen::VectorXcd& f) const;     // f^H R^{-1} f

 private:
  NoiseCovariance() = default;
  CovarianceForm form_ = CovarianceForm::Diagonal;
  int dim_ = 0;
  double sigma2_ = 0.0;
  bool loaded_ = false;
  Eigen::MatrixXcd r_;
  Eigen::LLT<Eigen::MatrixXcd> llt_;
};

struct TemplateVector {
  Eigen::VectorXcd entries;
  std::string provenance;
};

struct FilterVector {
  Eigen::VectorXcd entries;
};

struct SnrReport {
  double snr_total = 0.0;
  std::map<int, double> per_n;
  std::string form_used = "quadratic";  // ratio form is exposed via snr_ratio
  std::string noise_form;
  bool loading_applied = false;
};

/// Sample covariance of the given noise realizations: mean of nu nu^H for
/// the dense form, mean |nu_i|^2 for the diagonal form. Realizations must
/// share one length; degenerate estimates are diagonally loaded and flagged.
NoiseCovariance estimate_noise_cov(std::span<const SampledSignal> realizations,
                                   CovarianceForm form);

/// f(n): elementwise n-th power of the sampled base template.
TemplateVector template_vector(const Family& f, int n, const GridSpec& g);

/// |h^H F|^2 / (h^H R h).
double snr_ratio(const FilterVector& h, const TemplateVector& f,
                 const NoiseCovariance& r);

/// F^H R^{-1} F: the ratio maximized over h (attained at h = R^{-1} F).
double snr_quadratic(const TemplateVector& f, const NoiseCovariance& r);

/// Per-subchannel SNR_n = f(n)^H R^{-1} f(n) for each n; snr_total is the
/// stacked-template value under block-diagonal noise (the sum over n).
SnrReport snr_subchannel(const Family& f, std::span<const int> n_set,
                         const GridSpec& g, const NoiseCovariance& r);

/// Whitened matched-filter statistic (R^{-1} F)^H r.
cplx matched_filter_output(const SampledSignal& r, const TemplateVector& f,
                           const NoiseCovariance& cov);

}  // namespace teak
