#pragma once

#include <optional>
#include <string>
#include <vector>

#include "teak/config.hpp"
#include "teak/matched_filter.hpp"
#include "teak/projection.hpp"
#include "teak/signal.hpp"
#include "teak/signal_space.hpp"

namespace teak {

inline constexpr const char* kToolVersion = "0.1.0";

/// Everything one experiment produced. Every random quantity is traceable to
/// a seed echoed in `config`.
struct RunReport {
  std::string tool_version = kToolVersion;
  ExperimentConfig config;
  SampledSignal transmitted;  // reference template (written as template.csv)
  SampledSignal received;     // channel output (written as received.csv)
  std::vector<DerivativeTap> resolved_taps;
  std::vector<double> delays_used;
  std::string delay_mode;
  int k_max_effective = 0;
  ProjectionResult projection;
  std::optional<SnrReport> snr;  // absent for noiseless runs
  MembershipReport membership;
  double wall_ms = 0.0;
};

/// generate -> channel -> decompose -> SNR -> membership, per the config.
RunReport run_experiment(const ExperimentConfig& cfg);

/// Decompose an externally supplied received signal against the config's
/// basis (grid must match the config grid).
ProjectionResult decompose_signal(const SampledSignal& r, const ExperimentConfig& cfg);

/// Per-subchannel SNR from the config's noise model.
SnrReport snr_from_config(const ExperimentConfig& cfg);

/// Timing is nondeterministic, so it is only emitted when requested; all
/// other fields are byte-stable for a fixed config and seed.
std::string run_report_to_json(const RunReport& report, bool include_timing);

}  // namespace teak
