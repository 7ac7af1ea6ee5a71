#include "json_builders.hpp"

namespace teak::detail {

using nlohmann::json;

json projection_json(const ProjectionResult& p) {
  json cols = json::array();
  json dropped = json::array();
  for (std::size_t i = 0; i < p.columns.size(); ++i) {
    const auto& c = p.columns[i];
    cols.push_back({{"k", c.k},
                    {"n", c.n},
                    {"tau", c.tau},
                    {"beta_re", c.beta.real()},
                    {"beta_im", c.beta.imag()}});
    if (!c.retained) {
      dropped.push_back({{"index", i},
                         {"k", c.k},
                         {"n", c.n},
                         {"tau", c.tau},
                         {"reason", c.drop_reason}});
    }
  }
  return json{{"columns", cols},
              {"residual", p.residual},
              {"rank", p.numerical_rank},
              {"condition_estimate", p.condition_estimate},
              {"dropped", dropped}};
}

json snr_json(const SnrReport& r) {
  json per_n = json::object();
  for (const auto& [n, v] : r.per_n) per_n[std::to_string(n)] = v;
  return json{{"snr_total", r.snr_total},
              {"per_n", per_n},
              {"noise_form", r.noise_form},
              {"loading_applied", r.loading_applied}};
}

json membership_json(const MembershipReport& m) {
  return json{{"l0", m.l0.l0},
              {"saturated", m.l0.saturated},
              {"sup_norms", m.sup_norms},
              {"energy", m.energy},
              {"taylor_max_rel_error", m.taylor_max_rel_error},
              {"summability_max", m.summability_max},
              {"summability_bound", m.summability_bound},
              {"passes",
               {{"derivative_decay", m.passes.derivative_decay},
                {"summability", m.passes.summability},
                {"taylor_convergence", m.passes.taylor_convergence},
                {"energy_monotone", m.passes.energy_monotone}}}};
}

json taps_json(const std::vector<DerivativeTap>& taps) {
  json out = json::array();
  for (const auto& t : taps) {
    out.push_back({{"order", t.order},
                   {"delay", t.delay},
                   {"gain_re", t.gain.real()},
                   {"gain_im", t.gain.imag()}});
  }
  return out;
}

json config_json(const ExperimentConfig& cfg) {
  json j;
  if (const auto* de = std::get_if<DampedExpFamily>(&cfg.family)) {
    j["family"] = {{"kind", "damped_exp"}, {"tau", de->tau}};
  } else {
    j["family"] = {{"kind", "power_exp"}, {"d", std::get<PowerExpFamily>(cfg.family).d}};
  }
  j["grid"] = {{"t0", cfg.grid.t0}, {"dt", cfg.grid.dt}, {"len", cfg.grid.len}};

  json jc;
  switch (cfg.channel.kind) {
    case ChannelKind::Classical: {
      jc["kind"] = "classical";
      json taps = json::array();
      for (const auto& t : cfg.channel.classical_taps) {
        taps.push_back({{"amplitude", t.amplitude}, {"phase", t.phase}, {"delay", t.delay}});
      }
      jc["taps"] = taps;
      jc["n"] = cfg.channel.classical_n;
      break;
    }
    case ChannelKind::Derivative:
      jc["kind"] = "derivative";
      jc["taps"] = taps_json(cfg.channel.derivative_taps);
      break;
    case ChannelKind::SalehValenzuela:
      jc["kind"] = "saleh_valenzuela";
      jc["sv"] = {{"cluster_rate", cfg.channel.sv.cluster_rate},
                  {"ray_rate", cfg.channel.sv.ray_rate},
                  {"cluster_decay", cfg.channel.sv.cluster_decay},
                  {"ray_decay", cfg.channel.sv.ray_decay},
                  {"max_delay", cfg.channel.sv.max_delay},
                  {"seed", cfg.channel.sv.seed}};
      jc["n"] = cfg.channel.classical_n;
      break;
  }
  j["channel"] = jc;

  json jn;
  jn["sigma2"] = cfg.noise.sigma2;
  if (cfg.noise.seed_set) jn["seed"] = cfg.noise.seed;
  j["noise"] = jn;

  json jb;
  if (cfg.basis.k_max) {
    jb["k_max"] = *cfg.basis.k_max;
  } else {
    jb["k_max"] = "auto";
  }
  jb["n_set"] = cfg.basis.n_set;
  jb["delay_mode"] = cfg.basis.delay_mode == DelayMode::GroundTruth ? "ground_truth" : "blind";
  jb["max_taps"] = cfg.basis.max_taps;
  jb["min_separation"] = cfg.basis.min_separation;
  jb["detection_threshold"] = cfg.basis.detection_threshold;
  j["basis"] = jb;

  j["solver"] = {{"rank_tol", cfg.solver.rank_tol}, {"epsilon_rel", cfg.solver.epsilon_rel}};
  j["membership"] = {{"epsilon_rel", cfg.membership.epsilon_rel},
                     {"taylor_tol", cfg.membership.taylor_tol}};
  j["snr"] = {{"form", cfg.snr.form == CovarianceForm::Diagonal ? "diagonal" : "dense_estimated"},
              {"realizations", cfg.snr.realizations}};
  if (!cfg.output_dir.empty()) {
    j["output"] = {{"dir", cfg.output_dir}};
  }
  return j;
}

}  // namespace teak::detail
