#include <doctest.h>

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

#include "teak/channel.hpp"
#include "teak/projection.hpp"
#include "teak/signal_space.hpp"

using namespace teak;

TEST_CASE("build_basis layout and normalization") {
  const GridSpec g{0.0, 4.0 / 256, 256};

  SUBCASE("single column is the normalized template") {
    const BasisSpec spec{0, {2}, {0.0}, Family{DampedExpFamily{1.0}}};
    const DesignMatrix dm = build_basis(spec, g);
    REQUIRE(dm.columns.size() == 1);
    CHECK(dm.columns[0].k == 0);
    CHECK(dm.columns[0].n == 2);
    CHECK(dm.matrix.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
    const SampledSignal f2 = eval_family(DampedExpFamily{1.0}, 2, g);
    CHECK(dm.columns[0].scale == doctest::Approx(norm2(f2)).epsilon(1e-12));
  }

  SUBCASE("column count is delays x members x orders") {
    const BasisSpec spec{3, {2, 3}, {0.0, 0.5}, Family{PowerExpFamily{2}}};
    const DesignMatrix dm = build_basis(spec, g);
    CHECK(dm.columns.size() == 2 * 2 * 4);
    CHECK(dm.matrix.cols() == 16);
    CHECK(dm.matrix.rows() == g.len);
  }

  SUBCASE("validation errors") {
    CHECK_THROWS_AS(build_basis({13, {2}, {0.0}, Family{DampedExpFamily{1.0}}}, g),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_basis({2, {}, {0.0}, Family{DampedExpFamily{1.0}}}, g),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_basis({2, {1}, {0.0}, Family{DampedExpFamily{1.0}}}, g),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_basis({2, {2}, {100.0}, Family{DampedExpFamily{1.0}}}, g),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_basis({2, {2}, {}, Family{DampedExpFamily{1.0}}}, g),
                    std::invalid_argument);
  }
}

TEST_CASE("collinear damped-exponential basis has numerical rank one") {
  const GridSpec g{0.0, 50.0 / 1024, 1024};
  const BasisSpec spec{5, {2}, {0.0}, Family{DampedExpFamily{100.0}}};
  const DesignMatrix dm = build_basis(spec, g);
  const SampledSignal r = eval_family(DampedExpFamily{100.0}, 2, g);
  const ProjectionResult res = solve_projection(r, dm, 1e-10);
  CHECK(res.numerical_rank == 1);
  CHECK(res.residual <= 1e-10 * norm2(r));
  int dropped = 0;
  for (const auto& c : res.columns) {
    if (!c.retained) ++dropped;
  }
  CHECK(dropped == 5);
}

TEST_CASE("independent-column rank agrees with an SVD oracle") {
  const GridSpec g{0.0, 4.0 / 512, 512};
  const BasisSpec spec{2, {2}, {0.0, 64 * g.dt}, Family{PowerExpFamily{2}}};
  const DesignMatrix dm = build_basis(spec, g);

  // Independent oracle: count singular values above the same relative cut.
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dm.matrix);
  int svd_rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > 1e-10 * svd.singularValues()[0]) ++svd_rank;
  }
  CHECK(svd_rank == 6);

  const SampledSignal probe = eval_family(PowerExpFamily{2}, 2, g);
  const ProjectionResult res = solve_projection(probe, dm, 1e-10);
  CHECK(res.numerical_rank == svd_rank);
}

TEST_CASE("solving an exact span member recovers it") {
  const GridSpec g{0.0, 4.0 / 512, 512};
  const BasisSpec spec{3, {2}, {0.0}, Family{PowerExpFamily{2}}};
  const DesignMatrix dm = build_basis(spec, g);

  SampledSignal r = zeros(g);
  const int pick = 3;
  for (int i = 0; i < g.len; ++i) {
    r.samples[static_cast<std::size_t>(i)] =
        2.0 * dm.matrix(i, pick) * dm.columns[static_cast<std::size_t>(pick)].scale;
  }
  const ProjectionResult res = solve_projection(r, dm, 1e-10);
  CHECK(res.residual <= 1e-10 * norm2(r));
  for (std::size_t j = 0; j < res.columns.size(); ++j) {
    const double want = j == pick ? 2.0 : 0.0;
    CHECK(std::abs(res.columns[j].beta - cplx{want, 0.0}) <= 1e-9);
  }
}

TEST_CASE("noiseless synthetic channel gains are recovered to 1e-8") {
  const GridSpec g{0.0, 4.0 / 1024, 1024};
  const Family fam{PowerExpFamily{2}};
  const double tau = 37 * g.dt;
  const std::vector<DerivativeTap> taps{{0, tau, {1.5, 0.0}},
                                        {1, tau, {-0.7, 0.0}},
                                        {2, tau, {0.3, 0.0}}};
  const SampledSignal r = apply_derivative_channel(fam, std::vector<int>{2}, taps, {0.0, 0}, g);
  const BasisSpec spec{2, {2}, {tau}, fam};
  const ProjectionResult res = solve_projection(r, build_basis(spec, g), 1e-10);

  const double want[3] = {1.5, -0.7, 0.3};
  for (const auto& c : res.columns) {
    CHECK(std::abs(c.beta - cplx{want[c.k], 0.0}) <= 1e-8 * std::abs(want[c.k]));
  }
  CHECK(res.residual <= 1e-10 * norm2(r));
}

TEST_CASE("pure-noise residual matches the chi-square expectation") {
  // E ||P_perp r||^2 = (rows - rank) sigma^2 for white noise.
  const GridSpec g{0.0, 4.0 / 256, 256};
  const BasisSpec spec{3, {2}, {0.0}, Family{PowerExpFamily{2}}};
  const DesignMatrix dm = build_basis(spec, g);
  const double sigma2 = 0.5;
  double acc = 0.0;
  int rank = 0;
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    const SampledSignal r =
        gen_awgn(g, {sigma2, static_cast<std::uint64_t>(900 + seed)}, NoiseKind::Real);
    const ProjectionResult res = solve_projection(r, dm, 1e-10);
    acc += res.residual * res.residual;
    rank = res.numerical_rank;
  }
  acc /= seeds;
  const double want = (g.len - rank) * sigma2;
  CHECK(std::abs(acc - want) <= 0.1 * want);
}

TEST_CASE("projection self-consistency") {
  const GridSpec g{0.0, 4.0 / 512, 512};
  const BasisSpec spec{2, {2}, {0.0}, Family{PowerExpFamily{2}}};
  const DesignMatrix dm = build_basis(spec, g);
  const std::vector<DerivativeTap> taps{{0, 0.0, {1.5, 0.0}}, {1, 0.0, {-0.7, 0.0}}};
  const SampledSignal r = apply_derivative_channel(Family{PowerExpFamily{2}},
                                                   std::vector<int>{2}, taps, {0.02, 5}, g);
  const ProjectionResult first = solve_projection(r, dm, 1e-10);

  SUBCASE("normal-equation residual is tiny") {
    Eigen::VectorXcd beta(dm.matrix.cols());
    for (int j = 0; j < beta.size(); ++j) {
      beta[j] = first.columns[static_cast<std::size_t>(j)].beta *
                dm.columns[static_cast<std::size_t>(j)].scale;
    }
    const Eigen::Map<const Eigen::VectorXcd> b(r.samples.data(), g.len);
    const double grad = (dm.matrix.adjoint() * (dm.matrix * beta - b)).norm();
    CHECK(grad <= 1e-8 * std::sqrt(static_cast<double>(dm.matrix.cols())) * b.norm());
  }

  SUBCASE("re-solving the fitted signal is idempotent") {
    Eigen::VectorXcd beta(dm.matrix.cols());
    for (int j = 0; j < beta.size(); ++j) {
      beta[j] = first.columns[static_cast<std::size_t>(j)].beta *
                dm.columns[static_cast<std::size_t>(j)].scale;
    }
    const Eigen::VectorXcd fitted = dm.matrix * beta;
    SampledSignal rf = zeros(g);
    for (int i = 0; i < g.len; ++i) rf.samples[static_cast<std::size_t>(i)] = fitted[i];
    const ProjectionResult second = solve_projection(rf, dm, 1e-10);
    double scale_ref = 0.0;
    for (const auto& c : first.columns) scale_ref = std::max(scale_ref, std::abs(c.beta));
    for (std::size_t j = 0; j < first.columns.size(); ++j) {
      CHECK(std::abs(second.columns[j].beta - first.columns[j].beta) <= 1e-10 * scale_ref);
    }
    CHECK(second.residual <= 1e-12 * norm2(r));
  }

  SUBCASE("all-zero target returns zero coefficients with zero residual") {
    const ProjectionResult res = solve_projection(zeros(g), dm, 1e-10);
    CHECK(res.residual == 0.0);
    for (const auto& c : res.columns) CHECK(std::abs(c.beta) == 0.0);
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(solve_projection(r, dm, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_projection(r, dm, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_projection(r, DesignMatrix{}, 1e-10), std::invalid_argument);
    const SampledSignal wrong = zeros({0.0, 4.0 / 256, 256});
    CHECK_THROWS_AS(solve_projection(wrong, dm, 1e-10), std::invalid_argument);
  }
}

TEST_CASE("delay estimation") {
  const GridSpec g{0.0, 4.0 / 1024, 1024};
  const Family fam{PowerExpFamily{2}};

  SUBCASE("noiseless on-grid echo is found exactly") {
    const SampledSignal r = eval_family_derivative(fam, 2, 0, g, 20 * g.dt);
    const auto delays = estimate_delays(r, fam, 2, 1, 0.0);
    REQUIRE(delays.size() == 1);
    CHECK(std::abs(delays[0] - 20 * g.dt) <= 1e-9);
  }

  SUBCASE("two echoes at 20 dB are found within a sample (median)") {
    const SampledSignal e1 = eval_family_derivative(fam, 2, 0, g, 20 * g.dt);
    const SampledSignal e2 = eval_family_derivative(fam, 2, 0, g, 55 * g.dt);
    std::vector<double> errs;
    int both = 0;
    for (int seed = 0; seed < 100; ++seed) {
      SampledSignal r = zeros(g);
      for (int i = 0; i < g.len; ++i) {
        r.samples[static_cast<std::size_t>(i)] =
            e1.samples[static_cast<std::size_t>(i)] + 0.8 * e2.samples[static_cast<std::size_t>(i)];
      }
      double power = 0.0;
      for (const auto& v : r.samples) power += std::norm(v);
      power /= g.len;
      const SampledSignal eta =
          gen_awgn(g, {power / 100.0, static_cast<std::uint64_t>(3000 + seed)}, NoiseKind::Real);
      for (int i = 0; i < g.len; ++i) {
        r.samples[static_cast<std::size_t>(i)] += eta.samples[static_cast<std::size_t>(i)];
      }
      const auto delays = estimate_delays(r, fam, 2, 2, 10 * g.dt);
      if (delays.size() == 2) {
        ++both;
        errs.push_back(std::abs(delays[0] - 20 * g.dt) / g.dt);
        errs.push_back(std::abs(delays[1] - 55 * g.dt) / g.dt);
      }
    }
    CHECK(both >= 95);
    REQUIRE(!errs.empty());
    std::sort(errs.begin(), errs.end());
    CHECK(errs[errs.size() / 2] <= 1.0);
  }

  SUBCASE("pure noise yields no detections") {
    for (int seed = 0; seed < 20; ++seed) {
      const SampledSignal r =
          gen_awgn(g, {1.0, static_cast<std::uint64_t>(7000 + seed)}, NoiseKind::Real);
      CHECK(estimate_delays(r, fam, 2, 3, 0.0).empty());
    }
  }

  SUBCASE("subspace mode pins the delay under derivative taps") {
    const double tau = 37 * g.dt;
    const std::vector<DerivativeTap> taps{{0, tau, {1.5, 0.0}},
                                          {1, tau, {-0.7, 0.0}},
                                          {2, tau, {0.3, 0.0}}};
    const SampledSignal r =
        apply_derivative_channel(fam, std::vector<int>{2}, taps, {0.0, 0}, g);
    const auto plain = estimate_delays(r, fam, 2, 1, 0.0, 0.3, 0);
    const auto subspace = estimate_delays(r, fam, 2, 1, 0.0, 0.3, 2);
    REQUIRE(subspace.size() == 1);
    CHECK(std::abs(subspace[0] - tau) <= 0.1 * g.dt);
    // The single-template peak sits tens of samples away on this channel.
    if (!plain.empty()) CHECK(std::abs(plain[0] - tau) > 10 * g.dt);
  }

  SUBCASE("max_taps must be positive") {
    const SampledSignal r = eval_family(fam, 2, g);
    CHECK_THROWS_AS(estimate_delays(r, fam, 2, 0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("order truncation from the decay of the lemma-0 chain") {
  const GridSpec g{0.0, 50.0 / 512, 512};

  SUBCASE("matches the closed-form l0 for slow decay") {
    CHECK(truncate_orders(Family{DampedExpFamily{100.0}}, std::vector<int>{2}, g, 1e-8) == 4);
  }

  SUBCASE("looser epsilon never increases the cap") {
    const int tight = truncate_orders(Family{DampedExpFamily{100.0}}, std::vector<int>{2}, g, 1e-8);
    const int loose = truncate_orders(Family{DampedExpFamily{100.0}}, std::vector<int>{2}, g, 0.5);
    CHECK(loose <= tight);
  }

  SUBCASE("max over the member set") {
    const int one = truncate_orders(Family{DampedExpFamily{100.0}}, std::vector<int>{2}, g, 1e-8);
    const int two = truncate_orders(Family{DampedExpFamily{100.0}}, std::vector<int>{2, 5}, g, 1e-8);
    CHECK(two >= one);
  }

  SUBCASE("an all-zero sup sequence detects order zero") {
    const std::vector<double> sups{1.0, 0.0, 0.0, 0.0};
    const L0Result r = detect_l0_from_sups(sups, 1e-8);
    CHECK(r.l0 == 0);
    CHECK_FALSE(r.saturated);
    const std::vector<double> zeros_seq{0.0, 0.0, 0.0};
    CHECK(detect_l0_from_sups(zeros_seq, 1e-8).l0 == 0);
  }
}
