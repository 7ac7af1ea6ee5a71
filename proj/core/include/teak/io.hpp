#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "teak/channel.hpp"
#include "teak/matched_filter.hpp"
#include "teak/projection.hpp"
#include "teak/signal.hpp"
#include "teak/signal_space.hpp"

namespace teak {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Signal CSV: header "t,re,im", one row per sample, numbers printed with 17
/// significant digits so the textual round trip reproduces each double.
void write_signal_csv(const SampledSignal& s, std::ostream& out);
void write_signal_csv(const SampledSignal& s, const std::string& path);
SampledSignal read_signal_csv(std::istream& in);
SampledSignal read_signal_csv(const std::string& path);

/// Tap CSV: header "delay,order,gain_re,gain_im". Classical taps export as
/// order-0 rows with gain = amplitude * e^{j phase}.
void write_taps_csv(const std::vector<DerivativeTap>& taps, const std::string& path);
std::vector<DerivativeTap> read_taps_csv(const std::string& path);
std::vector<DerivativeTap> as_derivative_taps(const std::vector<ClassicalTap>& taps);

std::string projection_to_json(const ProjectionResult& p);
std::string snr_to_json(const SnrReport& r);
std::string membership_to_json(const MembershipReport& m);

/// {"error": {"message": ...}} for machine-readable failure output.
std::string error_to_json(const std::string& message);

}  // namespace teak
