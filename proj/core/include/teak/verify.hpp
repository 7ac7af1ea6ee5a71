#pragma once

#include <string>
#include <vector>

namespace teak {

struct VerifyOptions {
  // Fault-injection control: perturbs the operator-cancellation check so the
  // suite must fail; proves the harness actually detects violations.
  bool perturb_psi = false;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
  double ms = 0.0;
};

struct VerifySummary {
  std::vector<CheckResult> checks;
  double total_ms = 0.0;
  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

/// Runs every module's invariant checks at desk scale (seconds, not minutes).
VerifySummary run_verify_suite(const VerifyOptions& opts = {});

std::string verify_to_json(const VerifySummary& summary);
std::string verify_to_table(const VerifySummary& summary);

}  // namespace teak
