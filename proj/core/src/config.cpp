#include "teak/config.hpp"

#include <fstream>
#include <sstream>

#include "json_builders.hpp"

namespace teak {

namespace {

using nlohmann::json;

Family family_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "damped_exp") {
    return DampedExpFamily{j.at("tau").get<double>()};
  }
  if (kind == "power_exp") {
    return PowerExpFamily{j.at("d").get<int>()};
  }
  throw ConfigError("family.kind must be 'damped_exp' or 'power_exp'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    cfg.family = family_from_json(j.at("family"));

    const json& jg = j.at("grid");
    cfg.grid.t0 = jg.value("t0", 0.0);
    cfg.grid.dt = jg.at("dt").get<double>();
    cfg.grid.len = jg.at("len").get<int>();

    const json& jc = j.at("channel");
    const std::string kind = jc.at("kind").get<std::string>();
    if (kind == "classical") {
      cfg.channel.kind = ChannelKind::Classical;
      for (const json& jt : jc.value("taps", json::array())) {
        cfg.channel.classical_taps.push_back({jt.at("amplitude").get<double>(),
                                              jt.value("phase", 0.0),
                                              jt.value("delay", 0.0)});
      }
      cfg.channel.classical_n = jc.value("n", 1);
    } else if (kind == "derivative") {
      cfg.channel.kind = ChannelKind::Derivative;
      for (const json& jt : jc.value("taps", json::array())) {
        cfg.channel.derivative_taps.push_back(
            {jt.value("order", 0), jt.value("delay", 0.0),
             cplx{jt.at("gain_re").get<double>(), jt.value("gain_im", 0.0)}});
      }
    } else if (kind == "saleh_valenzuela") {
      cfg.channel.kind = ChannelKind::SalehValenzuela;
      const json& js = jc.at("sv");
      cfg.channel.sv.cluster_rate = js.at("cluster_rate").get<double>();
      cfg.channel.sv.ray_rate = js.at("ray_rate").get<double>();
      cfg.channel.sv.cluster_decay = js.at("cluster_decay").get<double>();
      cfg.channel.sv.ray_decay = js.at("ray_decay").get<double>();
      cfg.channel.sv.max_delay = js.at("max_delay").get<double>();
      if (js.contains("seed")) {
        cfg.channel.sv.seed = js.at("seed").get<std::uint64_t>();
        cfg.channel.sv_seed_set = true;
      }
      cfg.channel.classical_n = jc.value("n", 1);
    } else {
      throw ConfigError("channel.kind must be classical, derivative or saleh_valenzuela");
    }

    if (j.contains("noise")) {
      const json& jn = j.at("noise");
      cfg.noise.sigma2 = jn.value("sigma2", 0.0);
      if (jn.contains("seed")) {
        cfg.noise.seed = jn.at("seed").get<std::uint64_t>();
        cfg.noise.seed_set = true;
      }
    }

    if (j.contains("basis")) {
      const json& jb = j.at("basis");
      if (jb.contains("k_max")) {
        const json& jk = jb.at("k_max");
        if (jk.is_string()) {
          if (jk.get<std::string>() != "auto") {
            throw ConfigError("basis.k_max must be an integer or \"auto\"");
          }
        } else {
          cfg.basis.k_max = jk.get<int>();
        }
      }
      if (jb.contains("n_set")) {
        cfg.basis.n_set = jb.at("n_set").get<std::vector<int>>();
      }
      const std::string mode = jb.value("delay_mode", "ground_truth");
      if (mode == "ground_truth") {
        cfg.basis.delay_mode = DelayMode::GroundTruth;
      } else if (mode == "blind") {
        cfg.basis.delay_mode = DelayMode::Blind;
      } else {
        throw ConfigError("basis.delay_mode must be 'ground_truth' or 'blind'");
      }
      cfg.basis.max_taps = jb.value("max_taps", 1);
      cfg.basis.min_separation = jb.value("min_separation", 0.0);
      cfg.basis.detection_threshold = jb.value("detection_threshold", 0.3);
    }

    if (j.contains("solver")) {
      cfg.solver.rank_tol = j.at("solver").value("rank_tol", 1e-10);
      cfg.solver.epsilon_rel = j.at("solver").value("epsilon_rel", 1e-8);
    }
    if (j.contains("membership")) {
      cfg.membership.epsilon_rel = j.at("membership").value("epsilon_rel", 1e-8);
      cfg.membership.taylor_tol = j.at("membership").value("taylor_tol", 1e-6);
    }
    if (j.contains("output")) {
      cfg.output_dir = j.at("output").value("dir", "");
    }
    if (j.contains("snr")) {
      const std::string form = j.at("snr").value("form", "diagonal");
      if (form == "diagonal") {
        cfg.snr.form = CovarianceForm::Diagonal;
      } else if (form == "dense_estimated") {
        cfg.snr.form = CovarianceForm::Dense;
      } else {
        throw ConfigError("snr.form must be 'diagonal' or 'dense_estimated'");
      }
      cfg.snr.realizations = j.at("snr").value("realizations", 256);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& cfg) {
  try {
    validate(cfg.family);
    validate(cfg.grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (cfg.noise.sigma2 < 0.0) throw ConfigError("noise.sigma2 must be >= 0");
  if (cfg.noise.sigma2 > 0.0 && !cfg.noise.seed_set) {
    throw ConfigError("noise.seed is mandatory when sigma2 > 0");
  }
  if (cfg.channel.kind == ChannelKind::SalehValenzuela && !cfg.channel.sv_seed_set) {
    throw ConfigError("channel.sv.seed is mandatory for saleh_valenzuela channels");
  }
  if (cfg.channel.kind == ChannelKind::Classical && cfg.channel.classical_taps.empty()) {
    throw ConfigError("classical channel needs at least one tap");
  }
  if (cfg.channel.kind == ChannelKind::Derivative && cfg.channel.derivative_taps.empty()) {
    throw ConfigError("derivative channel needs at least one tap");
  }
  if (cfg.channel.classical_n < 1) throw ConfigError("channel.n must be >= 1");

  if (cfg.basis.n_set.empty()) throw ConfigError("basis.n_set must be nonempty");
  for (int n : cfg.basis.n_set) {
    if (n <= 1) throw ConfigError("basis.n_set entries must be > 1");
  }
  if (cfg.basis.k_max && (*cfg.basis.k_max < 0 || *cfg.basis.k_max > kMaxDerivativeOrder)) {
    throw ConfigError("basis.k_max must be in [0, 12]");
  }
  if (cfg.basis.max_taps < 1) throw ConfigError("basis.max_taps must be >= 1");
  if (!(cfg.solver.rank_tol > 0.0) || !(cfg.solver.rank_tol < 1.0)) {
    throw ConfigError("solver.rank_tol must be in (0, 1)");
  }
  if (!(cfg.solver.epsilon_rel > 0.0) || !(cfg.solver.epsilon_rel < 1.0)) {
    throw ConfigError("solver.epsilon_rel must be in (0, 1)");
  }
  if (cfg.snr.realizations < 1) throw ConfigError("snr.realizations must be >= 1");

  try {
    const GridSpec& g = cfg.grid;
    if (cfg.channel.kind == ChannelKind::Classical) {
      validate(std::span<const ClassicalTap>(cfg.channel.classical_taps), g);
    } else if (cfg.channel.kind == ChannelKind::Derivative) {
      validate(std::span<const DerivativeTap>(cfg.channel.derivative_taps), g);
    } else {
      validate(cfg.channel.sv);
      if (cfg.channel.sv.max_delay > grid_span(g)) {
        throw ConfigError("channel.sv.max_delay exceeds the grid span");
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string serialize_config(const ExperimentConfig& cfg) {
  return detail::config_json(cfg).dump(2);
}

}  // namespace teak
