#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mdiqkd {

/// Seeded property suites comparing the analytic pipeline with independent
/// routes: number-basis simulation, direct sampling, explicit two-qubit algebra.
struct VerifyOptions {
  std::uint64_t seed = 0;
  std::optional<std::size_t> n_max;  // oracle cutoff override
};

enum class SuiteStatus { pass, fail, skip };

struct SuiteResult {
  std::string name;
  SuiteStatus status = SuiteStatus::pass;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double max_deviation = 0.0;
  std::string detail;  // first offending tuple, skip reason, or summary
};

std::string status_name(SuiteStatus status);

/// oracle, gpm, reconstruction, concavity, jensen, soundness
std::vector<std::string> suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteResult run_suite(const std::string& name, const VerifyOptions& opts);

SuiteResult run_oracle_suite(const VerifyOptions& opts);
SuiteResult run_gpm_suite(const VerifyOptions& opts);
SuiteResult run_reconstruction_suite(const VerifyOptions& opts);
SuiteResult run_concavity_suite(const VerifyOptions& opts);
SuiteResult run_jensen_suite(const VerifyOptions& opts);
SuiteResult run_soundness_suite(const VerifyOptions& opts);

}  // namespace mdiqkd
