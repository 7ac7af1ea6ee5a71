// teak: template-family channel decomposition experiments.
//
// Subcommands: simulate, decompose, snr, membership, verify.
// Exit codes: 0 success, 1 verification failure, 2 usage/config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "teak/config.hpp"
#include "teak/io.hpp"
#include "teak/pipeline.hpp"
#include "teak/verify.hpp"

namespace fs = std::filesystem;

namespace {

int log_level() {
  const char* v = std::getenv("TEAK_LOG");
  if (v == nullptr) return 1;
  const std::string s{v};
  if (s == "quiet") return 0;
  if (s == "debug") return 2;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[teak] " << msg << "\n";
}

void debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[teak] " << msg << "\n";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw teak::IoError("cannot open for writing: " + path.string());
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

/// Writes to <out>/<name> when an output directory was given, else stdout.
void emit(const std::optional<fs::path>& out_dir, const std::string& name,
          const std::string& text) {
  if (out_dir) {
    fs::create_directories(*out_dir);
    write_file(*out_dir / name, text);
    info("wrote " + (*out_dir / name).string());
  } else {
    std::cout << text << "\n";
  }
}

teak::ExperimentConfig load(const std::string& config_path,
                            const std::optional<std::uint64_t>& seed_override) {
  teak::ExperimentConfig cfg = teak::load_config(config_path);
  if (seed_override) {
    cfg.noise.seed = *seed_override;
    cfg.noise.seed_set = true;
    teak::validate(cfg);
  }
  return cfg;
}

int cmd_simulate(const std::string& config_path, std::optional<fs::path> out_flag,
                 const std::optional<std::uint64_t>& seed, bool timing) {
  const teak::ExperimentConfig cfg = load(config_path, seed);
  if (!out_flag && cfg.output_dir.empty()) {
    throw teak::ConfigError("simulate needs an output directory (--out or config output.dir)");
  }
  const fs::path out_dir = out_flag ? *out_flag : fs::path(cfg.output_dir);
  const teak::RunReport rep = teak::run_experiment(cfg);

  fs::create_directories(out_dir);
  teak::write_signal_csv(rep.received, (out_dir / "received.csv").string());
  teak::write_signal_csv(rep.transmitted, (out_dir / "template.csv").string());
  teak::write_taps_csv(rep.resolved_taps, (out_dir / "taps.csv").string());
  write_file(out_dir / "run_report.json", teak::run_report_to_json(rep, timing));

  info("simulate: wrote received.csv, template.csv, taps.csv, run_report.json to " +
       out_dir.string());
  debug("residual " + std::to_string(rep.projection.residual) + ", rank " +
        std::to_string(rep.projection.numerical_rank));
  return 0;
}

int cmd_decompose(const std::string& config_path, const std::string& signal_path,
                  const std::optional<fs::path>& out_dir) {
  const teak::ExperimentConfig cfg = load(config_path, std::nullopt);
  const teak::SampledSignal r = teak::read_signal_csv(signal_path);
  const teak::ProjectionResult res = teak::decompose_signal(r, cfg);
  emit(out_dir, "projection.json", teak::projection_to_json(res));
  return 0;
}

int cmd_snr(const std::string& config_path, const std::optional<fs::path>& out_dir) {
  const teak::ExperimentConfig cfg = load(config_path, std::nullopt);
  const teak::SnrReport rep = teak::snr_from_config(cfg);
  emit(out_dir, "snr.json", teak::snr_to_json(rep));
  return 0;
}

int cmd_membership(const std::string& config_path, const std::optional<fs::path>& out_dir) {
  const teak::ExperimentConfig cfg = load(config_path, std::nullopt);
  const teak::MembershipReport rep = teak::check_membership(
      cfg.family, cfg.basis.n_set.front(), cfg.grid, cfg.membership);
  emit(out_dir, "membership.json", teak::membership_to_json(rep));
  return 0;
}

int cmd_verify(bool perturb_psi, const std::optional<fs::path>& out_dir) {
  teak::VerifyOptions opts;
  opts.perturb_psi = perturb_psi;
  const teak::VerifySummary summary = teak::run_verify_suite(opts);
  std::cout << teak::verify_to_table(summary);
  if (out_dir) {
    fs::create_directories(*out_dir);
    write_file(*out_dir / "verify.json", teak::verify_to_json(summary));
    info("wrote " + (*out_dir / "verify.json").string());
  }
  return summary.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conjugate energy-operator channel decomposition toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string signal_path;
  std::string out_str;
  std::uint64_t seed_value = 0;
  bool timing = false;
  bool perturb_psi = false;

  auto* sim = app.add_subcommand("simulate", "run a configured experiment end to end");
  sim->add_option("--config", config_path, "experiment config JSON")->required();
  auto* sim_out = sim->add_option("--out", out_str, "output directory (or config output.dir)");
  auto* sim_seed = sim->add_option("--seed", seed_value, "override the noise seed");
  sim->add_flag("--timing", timing, "include wall-clock timing in the report");

  auto* dec = app.add_subcommand("decompose", "project a received-signal CSV onto the basis");
  dec->add_option("--config", config_path, "experiment config JSON")->required();
  dec->add_option("--signal", signal_path, "received signal CSV")->required();
  auto* dec_out = dec->add_option("--out", out_str, "output directory (default: stdout)");

  auto* snr = app.add_subcommand("snr", "per-subchannel matched-filter SNR");
  snr->add_option("--config", config_path, "experiment config JSON")->required();
  auto* snr_out = snr->add_option("--out", out_str, "output directory (default: stdout)");

  auto* mem = app.add_subcommand("membership", "template-family membership checks");
  mem->add_option("--config", config_path, "experiment config JSON")->required();
  auto* mem_out = mem->add_option("--out", out_str, "output directory (default: stdout)");

  auto* ver = app.add_subcommand("verify", "run the invariant suite");
  ver->add_flag("--perturb-psi", perturb_psi, "inject a fault (the suite must fail)");
  auto* ver_out = ver->add_option("--out", out_str, "write verify.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      std::optional<std::uint64_t> seed;
      if (sim_seed->count() > 0) seed = seed_value;
      std::optional<fs::path> out;
      if (sim_out->count() > 0) out = fs::path(out_str);
      return cmd_simulate(config_path, out, seed, timing);
    }
    if (dec->parsed()) {
      std::optional<fs::path> out;
      if (dec_out->count() > 0) out = fs::path(out_str);
      return cmd_decompose(config_path, signal_path, out);
    }
    if (snr->parsed()) {
      std::optional<fs::path> out;
      if (snr_out->count() > 0) out = fs::path(out_str);
      return cmd_snr(config_path, out);
    }
    if (mem->parsed()) {
      std::optional<fs::path> out;
      if (mem_out->count() > 0) out = fs::path(out_str);
      return cmd_membership(config_path, out);
    }
    std::optional<fs::path> out;
    if (ver_out->count() > 0) out = fs::path(out_str);
    return cmd_verify(perturb_psi, out);
  } catch (const std::exception& e) {
    std::cout << teak::error_to_json(e.what()) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
