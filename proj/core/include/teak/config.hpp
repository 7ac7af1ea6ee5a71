#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "teak/channel.hpp"
#include "teak/families.hpp"
#include "teak/matched_filter.hpp"
#include "teak/signal.hpp"
#include "teak/signal_space.hpp"

namespace teak {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ChannelKind { Classical, Derivative, SalehValenzuela };
enum class DelayMode { GroundTruth, Blind };

struct ChannelConfig {
  ChannelKind kind = ChannelKind::Derivative;
  std::vector<ClassicalTap> classical_taps;
  std::vector<DerivativeTap> derivative_taps;
  SalehValenzuelaParams sv;
  bool sv_seed_set = false;
  int classical_n = 1;  // family member transmitted through a classical channel
};

struct NoiseConfig {
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

struct BasisConfig {
  std::optional<int> k_max;  // nullopt: auto-sized via truncate_orders
  std::vector<int> n_set{2};
  DelayMode delay_mode = DelayMode::GroundTruth;
  int max_taps = 1;
  double min_separation = 0.0;
  double detection_threshold = 0.3;
};

struct SolverConfig {
  double rank_tol = 1e-10;
  double epsilon_rel = 1e-8;
};

struct SnrConfig {
  CovarianceForm form = CovarianceForm::Diagonal;
  int realizations = 256;  // dense form: noise draws used for the estimate
};

/// One experiment: template family, grid, channel, noise, basis and solver
/// settings. Seeds are mandatory whenever noise or random channels are used.
struct ExperimentConfig {
  Family family;
  GridSpec grid;
  ChannelConfig channel;
  NoiseConfig noise;
  BasisConfig basis;
  SolverConfig solver;
  MembershipTolerances membership;
  SnrConfig snr;
  std::string output_dir;  // default output directory; --out overrides
};

/// Parse and validate. Throws ConfigError with a human-readable message.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON echo; parsing it reproduces an equivalent config and
/// re-serializing is byte-stable.
std::string serialize_config(const ExperimentConfig& cfg);

void validate(const ExperimentConfig& cfg);

}  // namespace teak
