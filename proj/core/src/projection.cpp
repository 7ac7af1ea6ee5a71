#include "teak/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "teak/signal_space.hpp"

namespace teak {

void validate(const BasisSpec& spec, const GridSpec& g) {
  validate(spec.family);
  validate(g);
  if (spec.k_max < 0 || spec.k_max > kMaxDerivativeOrder) {
    throw std::invalid_argument("basis: k_max must be in [0, 12]");
  }
  if (spec.n_set.empty()) {
    throw std::invalid_argument("basis: n_set must be nonempty");
  }
  for (int n : spec.n_set) {
    if (n <= 1) throw std::invalid_argument("basis: every n must be > 1");
  }
  for (double tau : spec.delays) {
    if (!(tau >= 0.0) || tau > grid_span(g)) {
      throw std::invalid_argument("basis: delay outside the grid span");
    }
  }
  if (spec.delays.empty()) {
    throw std::invalid_argument("basis: need at least one delay");
  }
}

DesignMatrix build_basis(const BasisSpec& spec, const GridSpec& g) {
  validate(spec, g);

  DesignMatrix dm;
  dm.grid = g;
  const int cols =
      static_cast<int>(spec.delays.size()) * static_cast<int>(spec.n_set.size()) *
      (spec.k_max + 1);
  dm.matrix.resize(g.len, cols);
  dm.columns.reserve(static_cast<std::size_t>(cols));

  int c = 0;
  for (double tau : spec.delays) {
    for (int n : spec.n_set) {
      for (int k = 0; k <= spec.k_max; ++k) {
        const SampledSignal col = eval_family_derivative(spec.family, n, k, g, tau);
        double norm_sq = 0.0;
        for (int i = 0; i < g.len; ++i) {
          norm_sq += std::norm(col.samples[static_cast<std::size_t>(i)]);
        }
        const double norm = std::sqrt(norm_sq);
        const double inv = norm > 0.0 ? 1.0 / norm : 0.0;
        for (int i = 0; i < g.len; ++i) {
          dm.matrix(i, c) = col.samples[static_cast<std::size_t>(i)] * inv;
        }
        dm.columns.push_back({k, n, tau, norm});
        ++c;
      }
    }
  }
  return dm;
}

ProjectionResult solve_projection(const SampledSignal& r, const DesignMatrix& A,
                                  double rank_tol) {
  validate(r);
  if (!(rank_tol > 0.0) || !(rank_tol < 1.0)) {
    throw std::invalid_argument("solve_projection: rank_tol must be in (0, 1)");
  }
  if (A.columns.empty()) {
    throw std::invalid_argument("solve_projection: empty basis");
  }
  if (static_cast<int>(r.size()) != static_cast<int>(A.matrix.rows()) ||
      !grid_compatible(r.grid(), A.grid)) {
    throw std::invalid_argument("solve_projection: signal grid does not match basis");
  }

  const Eigen::Map<const Eigen::VectorXcd> b(r.samples.data(),
                                             static_cast<Eigen::Index>(r.size()));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A.matrix);
  qr.setThreshold(rank_tol);
  const int rank = static_cast<int>(qr.rank());

  // Basic solution truncated to the retained pivots. Eigen's own solve()
  // keeps every epsilon-level pivot, which would smear the coefficients of
  // collinear columns across all of them.
  const auto& perm = qr.colsPermutation().indices();
  Eigen::VectorXcd beta_norm = Eigen::VectorXcd::Zero(A.matrix.cols());
  if (rank > 0) {
    Eigen::VectorXcd c = qr.householderQ().setLength(rank).adjoint() * b;
    Eigen::VectorXcd y = c.head(rank);
    qr.matrixQR()
        .topLeftCorner(rank, rank)
        .triangularView<Eigen::Upper>()
        .solveInPlace(y);
    for (int i = 0; i < rank; ++i) {
      beta_norm[perm[i]] = y[i];
    }
  }

  ProjectionResult res;
  res.numerical_rank = rank;

  std::vector<bool> retained(A.columns.size(), false);
  for (int i = 0; i < rank; ++i) {
    retained[static_cast<std::size_t>(perm[i])] = true;
  }

  res.columns.reserve(A.columns.size());
  for (std::size_t j = 0; j < A.columns.size(); ++j) {
    const auto& meta = A.columns[j];
    ProjectionResult::ColumnFit fit;
    fit.k = meta.k;
    fit.n = meta.n;
    fit.tau = meta.tau;
    fit.retained = retained[j] && meta.scale > 0.0;
    if (fit.retained) {
      fit.beta = beta_norm[static_cast<Eigen::Index>(j)] / meta.scale;
    } else {
      fit.beta = {0.0, 0.0};
      fit.drop_reason = meta.scale > 0.0 ? "pivot below rank tolerance" : "zero column";
    }
    res.columns.push_back(std::move(fit));
  }

  // Residual recomputed from the solution actually returned.
  res.residual = (A.matrix * beta_norm - b).norm();

  const auto& R = qr.matrixR();
  if (rank >= 1) {
    const double p0 = std::abs(R(0, 0));
    const double pr = std::abs(R(rank - 1, rank - 1));
    res.condition_estimate = pr > 0.0 ? p0 / pr : 0.0;
  }
  return res;
}

std::vector<double> estimate_delays(const SampledSignal& r, const Family& f, int n,
                                    int max_taps, double min_separation,
                                    double detection_threshold, int subspace_k_max) {
  validate(r);
  validate(f);
  if (max_taps < 1) {
    throw std::invalid_argument("estimate_delays: max_taps must be >= 1");
  }
  if (subspace_k_max < 0 || subspace_k_max > kMaxDerivativeOrder) {
    throw std::invalid_argument("estimate_delays: subspace_k_max must be in [0, 12]");
  }

  const GridSpec g = r.grid();
  const int len = g.len;
  const int nk = subspace_k_max + 1;

  // Effective template length: prefix holding all but 1e-10 of the energy.
  const SampledSignal tmpl = eval_family(f, n, g);
  double total = 0.0;
  for (const auto& v : tmpl.samples) total += std::norm(v);
  if (total == 0.0) return {};
  int l_eff = len;
  double acc = 0.0;
  for (int i = 0; i < len; ++i) {
    acc += std::norm(tmpl.samples[static_cast<std::size_t>(i)]);
    if (acc >= total * (1.0 - 1e-10)) {
      l_eff = i + 1;
      break;
    }
  }
  l_eff = std::max(l_eff, std::min(16, len));
  const int max_lag = len - l_eff;  // inclusive

  // Truncated reference columns d^k f^n, k = 0..subspace_k_max, and their
  // Gram matrix. With k_max = 0 the score below is the plain normalized
  // cross-correlation |<r, f^n>| / (||f^n|| ||r||).
  Eigen::MatrixXcd cols(l_eff, nk);
  for (int k = 0; k < nk; ++k) {
    const SampledSignal ck = eval_family_derivative(f, n, k, g, 0.0);
    for (int i = 0; i < l_eff; ++i) cols(i, k) = ck.samples[static_cast<std::size_t>(i)];
  }
  Eigen::MatrixXcd gram = cols.adjoint() * cols;
  // Small ridge keeps collinear derivative families (rank-1 Gram) solvable.
  gram += (1e-10 * gram.real().trace() / nk) * Eigen::MatrixXcd::Identity(nk, nk);
  const Eigen::LLT<Eigen::MatrixXcd> gram_llt(gram);

  std::vector<cplx> residual = r.samples;
  std::vector<bool> blocked(static_cast<std::size_t>(max_lag) + 1, false);
  std::vector<double> delays;

  while (static_cast<int>(delays.size()) < max_taps) {
    double res_norm_sq = 0.0;
    for (const auto& v : residual) res_norm_sq += std::norm(v);
    const double res_norm = std::sqrt(res_norm_sq);
    if (res_norm <= 0.0) break;

    // Captured-energy score per lag: ||projection of r onto the shifted
    // reference span||^2, normalized by the residual energy.
    std::vector<double> score(static_cast<std::size_t>(max_lag) + 1, 0.0);
    Eigen::VectorXcd v(nk);
    for (int m = 0; m <= max_lag; ++m) {
      for (int k = 0; k < nk; ++k) {
        cplx s{0.0, 0.0};
        for (int i = 0; i < l_eff; ++i) {
          s += std::conj(cols(i, k)) * residual[static_cast<std::size_t>(m + i)];
        }
        v[k] = s;
      }
      const double captured = std::max(v.dot(gram_llt.solve(v)).real(), 0.0);
      score[static_cast<std::size_t>(m)] = std::sqrt(captured) / res_norm;
    }

    int best = -1;
    double best_val = 0.0;
    for (int m = 0; m <= max_lag; ++m) {
      if (blocked[static_cast<std::size_t>(m)]) continue;
      if (score[static_cast<std::size_t>(m)] > best_val) {
        best_val = score[static_cast<std::size_t>(m)];
        best = m;  // ties keep the earliest lag
      }
    }
    if (best < 0 || best_val < detection_threshold) break;

    // Parabolic sub-sample refinement on the score peak.
    double offset = 0.0;
    if (best > 0 && best < max_lag) {
      const double ym = score[static_cast<std::size_t>(best - 1)];
      const double y0 = score[static_cast<std::size_t>(best)];
      const double yp = score[static_cast<std::size_t>(best + 1)];
      const double denom = ym - 2.0 * y0 + yp;
      if (std::abs(denom) > 1e-30) {
        offset = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
      }
    }
    const double tau = (static_cast<double>(best) + offset) * g.dt;
    delays.push_back(tau);

    // Successive cancellation: subtract the least-squares component of the
    // full-length shifted reference span at the refined delay.
    Eigen::MatrixXcd full(len, nk);
    for (int k = 0; k < nk; ++k) {
      const SampledSignal ck = eval_family_derivative(f, n, k, g, tau);
      for (int i = 0; i < len; ++i) full(i, k) = ck.samples[static_cast<std::size_t>(i)];
    }
    const Eigen::Map<const Eigen::VectorXcd> res_vec(residual.data(), len);
    Eigen::MatrixXcd gf = full.adjoint() * full;
    gf += (1e-10 * gf.real().trace() / nk) * Eigen::MatrixXcd::Identity(nk, nk);
    const Eigen::VectorXcd alpha = Eigen::LLT<Eigen::MatrixXcd>(gf).solve(full.adjoint() * res_vec);
    const Eigen::VectorXcd fitted = full * alpha;
    for (int i = 0; i < len; ++i) residual[static_cast<std::size_t>(i)] -= fitted[i];

    const int sep_lags = static_cast<int>(std::ceil(min_separation / g.dt));
    for (int m = std::max(0, best - sep_lags); m <= std::min(max_lag, best + sep_lags); ++m) {
      blocked[static_cast<std::size_t>(m)] = true;
    }
  }

  std::sort(delays.begin(), delays.end());
  return delays;
}

int truncate_orders(const Family& f, std::span<const int> n_set, const GridSpec& g,
                    double epsilon_rel) {
  validate(f);
  validate(g);
  if (n_set.empty()) {
    throw std::invalid_argument("truncate_orders: n_set must be nonempty");
  }
  int k_max = 0;
  for (int n : n_set) {
    if (n <= 1) throw std::invalid_argument("truncate_orders: every n must be > 1");
    // sup|d^l (f^{n-2} Psi_1^+(f))| = (2/n) sup|d^{l+1} f^n| in closed form.
    std::vector<double> sups(static_cast<std::size_t>(kMaxDerivativeOrder) + 1);
    for (int l = 0; l <= kMaxDerivativeOrder; ++l) {
      sups[static_cast<std::size_t>(l)] =
          (2.0 / n) * family_derivative_sup(f, n, l + 1, g);
    }
    const L0Result res = detect_l0_from_sups(sups, epsilon_rel);
    k_max = std::max(k_max, res.l0);
  }
  return k_max;
}

}  // namespace teak
