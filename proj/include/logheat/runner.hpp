#pragma once

#include <string>
#include <vector>

#include "logheat/config.hpp"

namespace logheat {

// Process exit codes: 0 ok, 1 validation, 2 numeric, 3 budget exhausted.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitBudget = 3;

struct RunOutcome {
  int exit_code = kExitOk;
  std::string failure;
  std::vector<std::string> artifacts;  // file names under the output directory
};

// Execute one experiment: writes NDJSON/CSV artifacts plus manifest.json
// (config hash, seed root, version, wall time). The manifest is written even
// when the run fails. Reruns with the same config and seed produce
// byte-identical data artifacts.
RunOutcome run(const RunConfig& cfg);

struct SuiteResult {
  std::string name;
  int instances;
  double worst_gap;  // smallest observed slack (negative = violation)
  double tolerance;  // pass iff worst_gap >= -tolerance
  bool pass;
};

// All certification suites behind the `verify` experiment: the log-Sobolev
// inequalities, the two logarithmic-difference estimates, the Gronwall bounds
// against their RK4 comparison solutions, the noise-family growth/Lipschitz
// checks, and entropy convexity.
std::vector<SuiteResult> run_verification(const VerifyOptions& opt,
                                          std::uint64_t seed, int workers = 1);

std::string format_double(double v);  // shortest round-trip "%.17g"
std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace logheat
