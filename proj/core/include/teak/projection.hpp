#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "teak/families.hpp"
#include "teak/signal.hpp"

namespace teak {

/// Which basis columns to build: d^k/dt^k f^n(t - tau) for k = 0..k_max,
/// n in n_set, tau in delays.
struct BasisSpec {
  int k_max = 0;
  std::vector<int> n_set;
  std::vector<double> delays;
  Family family;
};

void validate(const BasisSpec& spec, const GridSpec& g);

/// Sampled basis with unit-normalized columns; `scale` keeps the original
/// column norms so fitted coefficients can be reported in original units.
/// Columns are assembled delay-major, then n, then k (deterministic order).
struct DesignMatrix {
  struct Column {
    int k = 0;
    int n = 2;
    double tau = 0.0;
    double scale = 1.0;  // pre-normalization L2 norm (0 for a zero column)
  };
  std::vector<Column> columns;
  Eigen::MatrixXcd matrix;
  GridSpec grid;
};

struct ProjectionResult {
  struct ColumnFit {
    int k = 0;
    int n = 2;
    double tau = 0.0;
    cplx beta{0.0, 0.0};  // original (unnormalized) units
    bool retained = true;
    std::string drop_reason;
  };
  std::vector<ColumnFit> columns;
  double residual = 0.0;  // ||A beta - r||_2, recomputed from the returned beta
  int numerical_rank = 0;
  double condition_estimate = 0.0;
};

DesignMatrix build_basis(const BasisSpec& spec, const GridSpec& g);

/// Least squares via Householder QR with column pivoting. Columns whose pivot
/// falls below rank_tol * largest pivot are dropped and reported; the solution
/// on the retained set is returned with dropped coefficients at zero.
ProjectionResult solve_projection(const SampledSignal& r, const DesignMatrix& A,
                                  double rank_tol = 1e-10);

/// Blind delay search: normalized cross-correlation of r against f^n,
/// iterative peak picking with successive cancellation and parabolic
/// sub-sample refinement. Peaks below detection_threshold (normalized
/// correlation in [0,1]) are ignored; may return fewer than max_taps delays.
///
/// With subspace_k_max > 0 the correlation runs against the span of
/// {d^k f^n, k <= subspace_k_max} instead of f^n alone; a single-template
/// correlation peak is biased by tens of samples when derivative taps carry
/// comparable energy, while the subspace score peaks at the true delay.
std::vector<double> estimate_delays(const SampledSignal& r, const Family& f, int n,
                                    int max_taps, double min_separation,
                                    double detection_threshold = 0.3,
                                    int subspace_k_max = 0);

/// Basis order cap: max over n_set of the decay order of
/// sup|d^l/dt^l (f^{n-2} Psi_1^+(f))|, evaluated in closed form.
int truncate_orders(const Family& f, std::span<const int> n_set, const GridSpec& g,
                    double epsilon_rel);

}  // namespace teak
