#include "teak/differentiation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

namespace teak {

void validate(const DerivativeMethod& m) {
  if (m.kind == DerivativeKind::FiniteDifference) {
    if (m.accuracy_order != 2 && m.accuracy_order != 4 && m.accuracy_order != 6 &&
        m.accuracy_order != 8) {
      throw std::invalid_argument("derivative method: accuracy_order must be 2, 4, 6 or 8");
    }
  }
}

std::vector<double> fd_weights(double z, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size());
  if (n < m + 1) {
    throw std::invalid_argument("fd_weights: need at least m+1 nodes");
  }
  // Fornberg's recursion over all derivative orders 0..m; column m is returned.
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = c[j][m];
  return w;
}

int fd_interior_halfwidth(int order, int accuracy_order) {
  const int n_pts = 2 * ((order + 1) / 2) - 1 + accuracy_order;
  return (n_pts - 1) / 2;
}

double rounding_amplification(const DerivativeMethod& m, int order, double dt) {
  validate(m);
  if (order <= 0) return 1.0;
  if (m.kind == DerivativeKind::Spectral) return std::pow(M_PI / dt, order);
  const int half = fd_interior_halfwidth(order, m.accuracy_order);
  std::vector<double> nodes(static_cast<std::size_t>(2 * half) + 1);
  for (int j = 0; j <= 2 * half; ++j) nodes[static_cast<std::size_t>(j)] = j - half;
  double l1 = 0.0;
  for (double w : fd_weights(0.0, nodes, order)) l1 += std::abs(w);
  return l1 / std::pow(dt, order);
}

namespace {

SampledSignal differentiate_fd(const SampledSignal& s, int order, int accuracy) {
  const int len = static_cast<int>(s.size());
  const int half = fd_interior_halfwidth(order, accuracy);
  const int n_pts = 2 * half + 1;
  const int n_side = order + accuracy;  // one-sided stencil width, same accuracy
  if (len <= std::max(n_pts, n_side)) {
    throw std::invalid_argument("differentiate: signal shorter than stencil width");
  }

  const double inv_dtk = 1.0 / std::pow(s.dt, order);

  std::vector<double> centered_nodes(static_cast<std::size_t>(n_pts));
  for (int j = 0; j < n_pts; ++j) centered_nodes[static_cast<std::size_t>(j)] = j - half;
  const std::vector<double> w_int = fd_weights(0.0, centered_nodes, order);

  SampledSignal out = zeros_like(s);
  out.boundary_guard = s.boundary_guard + half;

  for (int i = half; i < len - half; ++i) {
    cplx acc{0.0, 0.0};
    for (int j = 0; j < n_pts; ++j) {
      acc += w_int[static_cast<std::size_t>(j)] *
             s.samples[static_cast<std::size_t>(i - half + j)];
    }
    out.samples[static_cast<std::size_t>(i)] = acc * inv_dtk;
  }

  // One-sided rows at both edges keep the interior accuracy order.
  std::vector<double> side_nodes(static_cast<std::size_t>(n_side));
  for (int j = 0; j < n_side; ++j) side_nodes[static_cast<std::size_t>(j)] = j;
  for (int i = 0; i < half; ++i) {
    const std::vector<double> w = fd_weights(static_cast<double>(i), side_nodes, order);
    cplx acc{0.0, 0.0};
    for (int j = 0; j < n_side; ++j) {
      acc += w[static_cast<std::size_t>(j)] * s.samples[static_cast<std::size_t>(j)];
    }
    out.samples[static_cast<std::size_t>(i)] = acc * inv_dtk;
  }
  for (int i = len - half; i < len; ++i) {
    const int base = len - n_side;
    const std::vector<double> w =
        fd_weights(static_cast<double>(i - base), side_nodes, order);
    cplx acc{0.0, 0.0};
    for (int j = 0; j < n_side; ++j) {
      acc += w[static_cast<std::size_t>(j)] * s.samples[static_cast<std::size_t>(base + j)];
    }
    out.samples[static_cast<std::size_t>(i)] = acc * inv_dtk;
  }
  return out;
}

SampledSignal differentiate_spectral(const SampledSignal& s, int order) {
  const int len = static_cast<int>(s.size());
  if (len < 8) {
    throw std::invalid_argument("differentiate: spectral method needs length >= 8");
  }

  Eigen::FFT<double> fft;
  std::vector<cplx> spectrum;
  fft.fwd(spectrum, s.samples);

  const double base = 2.0 * M_PI / (s.dt * static_cast<double>(len));
  for (int k = 0; k < len; ++k) {
    const int idx = (k <= len / 2) ? k : k - len;
    if (len % 2 == 0 && k == len / 2 && order % 2 == 1) {
      // Odd derivatives have no consistent Nyquist-bin sign; drop it.
      spectrum[static_cast<std::size_t>(k)] = 0.0;
      continue;
    }
    const cplx iw{0.0, base * static_cast<double>(idx)};
    cplx mult{1.0, 0.0};
    for (int q = 0; q < order; ++q) mult *= iw;
    spectrum[static_cast<std::size_t>(k)] *= mult;
  }

  std::vector<cplx> time;
  fft.inv(time, spectrum);
  SampledSignal out = s;
  out.samples = std::move(time);
  return out;
}

}  // namespace

SampledSignal differentiate(const SampledSignal& s, int order, const DerivativeMethod& m) {
  validate(s);
  validate(m);
  if (order < 0) throw std::invalid_argument("differentiate: order must be >= 0");
  if (order > kMaxDerivativeOrder) {
    throw std::invalid_argument("differentiate: order must be <= " +
                                std::to_string(kMaxDerivativeOrder));
  }
  if (order == 0) return s;
  return m.kind == DerivativeKind::FiniteDifference
             ? differentiate_fd(s, order, m.accuracy_order)
             : differentiate_spectral(s, order);
}

}  // namespace teak
