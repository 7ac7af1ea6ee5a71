#include <doctest.h>

#include <cmath>
#include <vector>

#include "teak/channel.hpp"
#include "teak/matched_filter.hpp"
#include "teak/rng.hpp"

using namespace teak;

namespace {

Eigen::MatrixXcd ar1_covariance(int dim, double rho, double sigma2) {
  Eigen::MatrixXcd r(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) r(i, j) = sigma2 * std::pow(rho, std::abs(i - j));
  }
  return r;
}

}  // namespace

TEST_CASE("noise covariance construction") {
  SUBCASE("diagonal form requires positive power") {
    CHECK_THROWS_AS(NoiseCovariance::diagonal(0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(NoiseCovariance::diagonal(-1.0, 8), std::invalid_argument);
    const NoiseCovariance c = NoiseCovariance::diagonal(2.0, 8);
    CHECK(c.dim() == 8);
    CHECK_FALSE(c.loading_applied());
  }

  SUBCASE("singular dense input is loaded and flagged") {
    const NoiseCovariance c = NoiseCovariance::dense(Eigen::MatrixXcd::Zero(4, 4));
    CHECK(c.loading_applied());
    const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(4);
    CHECK(c.quad_inverse(one) > 0.0);
  }

  SUBCASE("dimension mismatches are rejected") {
    const NoiseCovariance c = NoiseCovariance::diagonal(1.0, 8);
    CHECK_THROWS_AS(c.solve(Eigen::VectorXcd::Ones(4)), std::invalid_argument);
  }
}

TEST_CASE("covariance estimation from realizations") {
  SUBCASE("needs at least one realization") {
    CHECK_THROWS_AS(estimate_noise_cov({}, CovarianceForm::Diagonal), std::invalid_argument);
  }

  SUBCASE("all-zero noise is flagged degenerate") {
    std::vector<SampledSignal> zs(3, zeros({0.0, 1.0, 16}));
    const NoiseCovariance c = estimate_noise_cov(zs, CovarianceForm::Diagonal);
    CHECK(c.loading_applied());
  }

  SUBCASE("diagonal estimate converges to sigma2") {
    // 100 realizations x 1000 samples of sigma2 = 2 noise.
    std::vector<SampledSignal> reals;
    for (int i = 0; i < 100; ++i) {
      reals.push_back(gen_awgn({0.0, 1.0, 1000}, {2.0, static_cast<std::uint64_t>(500 + i)},
                               NoiseKind::Complex));
    }
    const NoiseCovariance c = estimate_noise_cov(reals, CovarianceForm::Diagonal);
    CHECK(c.sigma2() >= 1.98);
    CHECK(c.sigma2() <= 2.02);
  }

  SUBCASE("white-noise dense estimate has small off-diagonals") {
    const int dim = 16;
    const int count = 4000;
    std::vector<SampledSignal> reals;
    reals.reserve(count);
    for (int i = 0; i < count; ++i) {
      reals.push_back(gen_awgn({0.0, 1.0, dim}, {1.0, static_cast<std::uint64_t>(10000 + i)},
                               NoiseKind::Complex));
    }
    const NoiseCovariance c = estimate_noise_cov(reals, CovarianceForm::Dense);
    REQUIRE(c.form() == CovarianceForm::Dense);
    double diag_mean = 0.0;
    for (int i = 0; i < dim; ++i) diag_mean += c.matrix()(i, i).real();
    diag_mean /= dim;
    double worst_off = 0.0;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        if (i != j) worst_off = std::max(worst_off, std::abs(c.matrix()(i, j)));
      }
    }
    CHECK(worst_off <= 3.0 / std::sqrt(static_cast<double>(count)) * diag_mean);
  }
}

TEST_CASE("snr ratio and quadratic forms") {
  const int dim = 128;
  const GridSpec g{0.0, 4.0 / dim, dim};
  const TemplateVector f = template_vector(DampedExpFamily{1.0}, 2, g);

  SUBCASE("matched filter with identity noise gives the template energy") {
    CHECK(snr_ratio({f.entries}, f, NoiseCovariance::diagonal(1.0, dim)) ==
          doctest::Approx(f.entries.squaredNorm()).epsilon(1e-12));
  }

  SUBCASE("orthogonal filter gives zero") {
    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(dim);
    h[0] = f.entries[1];
    h[1] = -f.entries[0];
    CHECK(snr_ratio({h}, f, NoiseCovariance::diagonal(1.0, dim)) <=
          1e-20 * f.entries.squaredNorm());
  }

  SUBCASE("zero filter is rejected") {
    CHECK_THROWS_AS(snr_ratio({Eigen::VectorXcd::Zero(dim)}, f,
                              NoiseCovariance::diagonal(1.0, dim)),
                    std::invalid_argument);
  }

  SUBCASE("white-noise bound ||F||^2/sigma2 with equality only along F") {
    const double sigma2 = 0.25;
    const NoiseCovariance cov = NoiseCovariance::diagonal(sigma2, dim);
    const double bound = f.entries.squaredNorm() / sigma2;
    Rng rng(4242);
    for (int trial = 0; trial < 500; ++trial) {
      Eigen::VectorXcd h(dim);
      for (int i = 0; i < dim; ++i) {
        const auto [x, y] = rng.gaussian_pair();
        h[i] = cplx{x, y};
      }
      CHECK(snr_ratio({h}, f, cov) <= bound * (1.0 + 1e-12));
    }
    CHECK(snr_ratio({cplx{0.0, 2.5} * f.entries}, f, cov) ==
          doctest::Approx(bound).epsilon(1e-12));
  }

  SUBCASE("quadratic form closed forms") {
    CHECK(snr_quadratic(f, NoiseCovariance::diagonal(1.0, dim)) ==
          doctest::Approx(f.entries.squaredNorm()).epsilon(1e-14));
    CHECK(snr_quadratic(f, NoiseCovariance::diagonal(0.37, dim)) ==
          doctest::Approx(f.entries.squaredNorm() / 0.37).epsilon(1e-14));
  }

  SUBCASE("whitened filter attains the quadratic form under AR(1) noise") {
    const NoiseCovariance cov = NoiseCovariance::dense(ar1_covariance(dim, 0.5, 1.0));
    const double q = snr_quadratic(f, cov);
    const double at_opt = snr_ratio({cov.solve(f.entries)}, f, cov);
    CHECK(std::abs(at_opt - q) <= 1e-10 * q);
  }
}

TEST_CASE("per-subchannel snr report") {
  const double tau = 1.0;
  const int n = 2;

  SUBCASE("fine-grid value approaches energy over noise density") {
    // Oracle: SNR_n ~ (tau/(2n)) / (sigma2 dt).
    const int len = 65536;
    const double span = 20.0 * tau / n;
    const GridSpec g{0.0, span / (len - 1), len};
    const double sigma2 = 0.04;
    const SnrReport rep = snr_subchannel(DampedExpFamily{tau}, std::vector<int>{n}, g,
                                         NoiseCovariance::diagonal(sigma2, len));
    const double want = (tau / (2.0 * n)) / (sigma2 * g.dt);
    CHECK(std::abs(rep.per_n.at(n) - want) <= 5e-3 * want);
  }

  const int len = 256;
  const GridSpec g{0.0, 6.0 / len, len};

  SUBCASE("identity covariance gives the squared template norm") {
    const SnrReport rep = snr_subchannel(DampedExpFamily{tau}, std::vector<int>{2}, g,
                                         NoiseCovariance::diagonal(1.0, len));
    const TemplateVector f2 = template_vector(DampedExpFamily{tau}, 2, g);
    CHECK(rep.per_n.at(2) == doctest::Approx(f2.entries.squaredNorm()).epsilon(1e-13));
    CHECK(rep.snr_total == doctest::Approx(rep.per_n.at(2)));
  }

  SUBCASE("doubling the covariance halves every value") {
    const SnrReport a = snr_subchannel(DampedExpFamily{tau}, std::vector<int>{2, 3}, g,
                                       NoiseCovariance::diagonal(0.5, len));
    const SnrReport b = snr_subchannel(DampedExpFamily{tau}, std::vector<int>{2, 3}, g,
                                       NoiseCovariance::diagonal(1.0, len));
    CHECK(a.per_n.at(2) == doctest::Approx(2.0 * b.per_n.at(2)).epsilon(1e-14));
    CHECK(a.per_n.at(3) == doctest::Approx(2.0 * b.per_n.at(3)).epsilon(1e-14));
    CHECK(a.snr_total == doctest::Approx(2.0 * b.snr_total).epsilon(1e-14));
  }

  SUBCASE("growing the member set never lowers the stacked total") {
    double prev = -1.0;
    std::vector<int> n_set;
    for (int member : {2, 3, 4, 5}) {
      n_set.push_back(member);
      const SnrReport rep = snr_subchannel(DampedExpFamily{tau}, n_set, g,
                                           NoiseCovariance::diagonal(0.5, len));
      CHECK(rep.snr_total >= prev);
      prev = rep.snr_total;
    }
  }

  SUBCASE("covariance dimension must match the grid") {
    CHECK_THROWS_AS(snr_subchannel(DampedExpFamily{tau}, std::vector<int>{2}, g,
                                   NoiseCovariance::diagonal(1.0, len + 1)),
                    std::invalid_argument);
  }
}

TEST_CASE("matched filter output statistic") {
  const int dim = 128;
  const GridSpec g{0.0, 4.0 / dim, dim};
  const TemplateVector f = template_vector(DampedExpFamily{1.0}, 2, g);
  const NoiseCovariance eye = NoiseCovariance::diagonal(1.0, dim);

  SUBCASE("template input gives its squared norm") {
    SampledSignal r = zeros(g);
    for (int i = 0; i < dim; ++i) r.samples[static_cast<std::size_t>(i)] = f.entries[i];
    const cplx out = matched_filter_output(r, f, eye);
    CHECK(out.real() == doctest::Approx(f.entries.squaredNorm()).epsilon(1e-12));
    CHECK(std::abs(out.imag()) <= 1e-12 * f.entries.squaredNorm());
  }

  SUBCASE("orthogonal input gives zero") {
    SampledSignal r = zeros(g);
    r.samples[0] = f.entries[1];
    r.samples[1] = -f.entries[0];
    CHECK(std::abs(matched_filter_output(r, f, eye)) <= 1e-14 * f.entries.squaredNorm());
  }

  SUBCASE("detection succeeds in at least 95 of 100 seeds") {
    const double e = f.entries.squaredNorm();
    const double sigma2 = 0.01 * e / dim;
    int hits = 0;
    for (int seed = 0; seed < 100; ++seed) {
      SampledSignal r = zeros(g);
      const SampledSignal eta =
          gen_awgn(g, {sigma2, static_cast<std::uint64_t>(8000 + seed)}, NoiseKind::Real);
      for (int i = 0; i < dim; ++i) {
        r.samples[static_cast<std::size_t>(i)] = f.entries[i] + eta.samples[static_cast<std::size_t>(i)];
      }
      if (matched_filter_output(r, f, eye).real() >= 0.9 * e) ++hits;
    }
    CHECK(hits >= 95);
  }
}
