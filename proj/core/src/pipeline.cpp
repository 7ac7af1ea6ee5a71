#include "teak/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json_builders.hpp"
#include "teak/io.hpp"

namespace teak {

namespace {

// Delay search needs a compact reference span: once the span holds many
// derivative orders it Taylor-fits shifted copies equally well at any nearby
// lag and the correlation score goes flat.
constexpr int kDelaySearchOrderCap = 2;

bool channel_is_real(const ExperimentConfig& cfg) {
  if (cfg.channel.kind == ChannelKind::Derivative) {
    for (const auto& t : cfg.channel.derivative_taps) {
      if (t.gain.imag() != 0.0) return false;
    }
    return true;
  }
  if (cfg.channel.kind == ChannelKind::Classical) {
    for (const auto& t : cfg.channel.classical_taps) {
      if (std::sin(t.phase) != 0.0) return false;
    }
    return true;
  }
  return false;  // Saleh-Valenzuela phases are uniform on [0, 2pi)
}

std::vector<double> unique_sorted_delays(const std::vector<DerivativeTap>& taps) {
  std::vector<double> delays;
  delays.reserve(taps.size());
  for (const auto& t : taps) delays.push_back(t.delay);
  std::sort(delays.begin(), delays.end());
  delays.erase(std::unique(delays.begin(), delays.end()), delays.end());
  return delays;
}

NoiseCovariance covariance_from_config(const ExperimentConfig& cfg) {
  if (cfg.noise.sigma2 <= 0.0) {
    throw ConfigError("snr requires noise.sigma2 > 0");
  }
  if (cfg.snr.form == CovarianceForm::Diagonal) {
    return NoiseCovariance::diagonal(cfg.noise.sigma2, cfg.grid.len);
  }
  // Dense form: estimate from seeded noise draws (realization i uses seed+1+i,
  // distinct from the channel's own seed).
  const NoiseKind kind = channel_is_real(cfg) ? NoiseKind::Real : NoiseKind::Complex;
  std::vector<SampledSignal> draws;
  draws.reserve(static_cast<std::size_t>(cfg.snr.realizations));
  for (int i = 0; i < cfg.snr.realizations; ++i) {
    draws.push_back(gen_awgn(cfg.grid,
                             {cfg.noise.sigma2, cfg.noise.seed + 1 + static_cast<std::uint64_t>(i)},
                             kind));
  }
  return estimate_noise_cov(draws, CovarianceForm::Dense);
}

}  // namespace

ProjectionResult decompose_signal(const SampledSignal& r, const ExperimentConfig& cfg) {
  validate(cfg);
  if (!grid_compatible(r.grid(), cfg.grid)) {
    throw ConfigError("signal grid does not match the config grid");
  }

  const int k_max = cfg.basis.k_max
                        ? *cfg.basis.k_max
                        : truncate_orders(cfg.family, cfg.basis.n_set, cfg.grid,
                                          cfg.solver.epsilon_rel);
  std::vector<double> delays;
  if (cfg.basis.delay_mode == DelayMode::Blind) {
    delays = estimate_delays(r, cfg.family, cfg.basis.n_set.front(), cfg.basis.max_taps,
                             cfg.basis.min_separation, cfg.basis.detection_threshold,
                             std::min(k_max, kDelaySearchOrderCap));
  } else {
    switch (cfg.channel.kind) {
      case ChannelKind::Derivative:
        delays = unique_sorted_delays(cfg.channel.derivative_taps);
        break;
      case ChannelKind::Classical:
        delays = unique_sorted_delays(as_derivative_taps(cfg.channel.classical_taps));
        break;
      case ChannelKind::SalehValenzuela:
        delays = unique_sorted_delays(
            as_derivative_taps(gen_saleh_valenzuela(cfg.channel.sv)));
        break;
    }
  }

  if (delays.empty()) {
    // Nothing detected: report the whole signal as residual.
    ProjectionResult res;
    res.residual = norm2(r);
    return res;
  }

  const BasisSpec spec{k_max, cfg.basis.n_set, delays, cfg.family};
  const DesignMatrix dm = build_basis(spec, cfg.grid);
  return solve_projection(r, dm, cfg.solver.rank_tol);
}

SnrReport snr_from_config(const ExperimentConfig& cfg) {
  validate(cfg);
  const NoiseCovariance cov = covariance_from_config(cfg);
  return snr_subchannel(cfg.family, cfg.basis.n_set, cfg.grid, cov);
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  validate(cfg);

  RunReport rep;
  rep.config = cfg;

  // Generate the channel output and record the resolved taps.
  switch (cfg.channel.kind) {
    case ChannelKind::Derivative: {
      rep.transmitted = eval_family(cfg.family, cfg.basis.n_set.front(), cfg.grid);
      rep.resolved_taps = cfg.channel.derivative_taps;
      rep.received = apply_derivative_channel(cfg.family, cfg.basis.n_set,
                                              cfg.channel.derivative_taps,
                                              {cfg.noise.sigma2, cfg.noise.seed}, cfg.grid);
      break;
    }
    case ChannelKind::Classical: {
      rep.transmitted = eval_family(cfg.family, cfg.channel.classical_n, cfg.grid);
      rep.resolved_taps = as_derivative_taps(cfg.channel.classical_taps);
      rep.received = apply_classical_channel(rep.transmitted, cfg.channel.classical_taps,
                                             {cfg.noise.sigma2, cfg.noise.seed});
      break;
    }
    case ChannelKind::SalehValenzuela: {
      rep.transmitted = eval_family(cfg.family, cfg.channel.classical_n, cfg.grid);
      const std::vector<ClassicalTap> taps = gen_saleh_valenzuela(cfg.channel.sv);
      rep.resolved_taps = as_derivative_taps(taps);
      rep.received = apply_classical_channel(rep.transmitted, taps,
                                             {cfg.noise.sigma2, cfg.noise.seed});
      break;
    }
  }

  rep.k_max_effective = cfg.basis.k_max
                            ? *cfg.basis.k_max
                            : truncate_orders(cfg.family, cfg.basis.n_set, cfg.grid,
                                              cfg.solver.epsilon_rel);

  // Delay resolution for the basis.
  if (cfg.basis.delay_mode == DelayMode::Blind) {
    rep.delay_mode = "blind";
    rep.delays_used = estimate_delays(rep.received, cfg.family, cfg.basis.n_set.front(),
                                      cfg.basis.max_taps, cfg.basis.min_separation,
                                      cfg.basis.detection_threshold,
                                      std::min(rep.k_max_effective, kDelaySearchOrderCap));
  } else {
    rep.delay_mode = "ground_truth";
    rep.delays_used = unique_sorted_delays(rep.resolved_taps);
  }

  if (rep.delays_used.empty()) {
    rep.projection.residual = norm2(rep.received);
  } else {
    const BasisSpec spec{rep.k_max_effective, cfg.basis.n_set, rep.delays_used, cfg.family};
    const DesignMatrix dm = build_basis(spec, cfg.grid);
    rep.projection = solve_projection(rep.received, dm, cfg.solver.rank_tol);
  }

  if (cfg.noise.sigma2 > 0.0) {
    const NoiseCovariance cov = covariance_from_config(cfg);
    rep.snr = snr_subchannel(cfg.family, cfg.basis.n_set, cfg.grid, cov);
  }

  rep.membership =
      check_membership(cfg.family, cfg.basis.n_set.front(), cfg.grid, cfg.membership);

  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rep;
}

std::string run_report_to_json(const RunReport& report, bool include_timing) {
  nlohmann::json j;
  j["tool_version"] = report.tool_version;
  j["config"] = detail::config_json(report.config);
  j["resolved"] = {{"delay_mode", report.delay_mode},
                   {"delays", report.delays_used},
                   {"k_max_effective", report.k_max_effective},
                   {"taps", detail::taps_json(report.resolved_taps)}};
  j["projection"] = detail::projection_json(report.projection);
  if (report.snr) {
    j["snr"] = detail::snr_json(*report.snr);
  } else {
    j["snr"] = nullptr;
  }
  j["membership"] = detail::membership_json(report.membership);
  if (include_timing) {
    j["timing"] = {{"wall_ms", report.wall_ms}};
  }
  return j.dump(2);
}

}  // namespace teak
