#pragma once

// Internal JSON assembly shared by io.cpp, config.cpp and pipeline.cpp.
// Not installed; public headers stay free of the JSON dependency.

#include <json.hpp>

#include "teak/channel.hpp"
#include "teak/config.hpp"
#include "teak/matched_filter.hpp"
#include "teak/projection.hpp"
#include "teak/signal_space.hpp"

namespace teak::detail {

nlohmann::json projection_json(const ProjectionResult& p);
nlohmann::json snr_json(const SnrReport& r);
nlohmann::json membership_json(const MembershipReport& m);
nlohmann::json config_json(const ExperimentConfig& cfg);
nlohmann::json taps_json(const std::vector<DerivativeTap>& taps);

}  // namespace teak::detail
