#pragma once

#include <optional>
#include <string>
#include <vector>

#include "logheat/ldp.hpp"

namespace logheat {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind { Simulate, Skeleton, Rate, Tail, Ldp1, Moments, Verify };

ExperimentKind experiment_from_name(const std::string& name);
std::string experiment_name(ExperimentKind kind);

struct TailOptions {
  std::vector<double> epsilons{0.4, 0.2, 0.1};
  int paths = 500;
};

struct Ldp1Options {
  std::vector<double> epsilons{0.4, 0.2, 0.1, 0.05};
  int paths = 200;
  double delta = 0.5;
};

struct MomentOptions {
  double p = 2.0;
  int paths = 500;
  std::vector<int> levels{8, 16};
};

struct VerifyOptions {
  int sobolev_instances = 1000;
  int difference_instances = 500;
  int gronwall_instances = 100;
  int noise_samples = 10000;
  int entropy_pairs = 200;
};

struct RunConfig {
  ExperimentKind kind = ExperimentKind::Simulate;
  std::uint64_t seed = 42;
  std::string output_dir = "out";
  int workers = 1;

  SdeConfig sde;  // domain, marks, noise, integrator parameters
  Control control{1, 1, 0.5};
  TargetFunctional target;
  RateOptions rate;
  TailOptions tail;
  Ldp1Options ldp1;
  MomentOptions moments;
  VerifyOptions verify;

  // Canonical serialized form of the effective configuration; hashed into the
  // run manifest.
  std::string canonical_text;
};

struct ConfigResult {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;  // all validation failures, with field paths

  bool ok() const { return errors.empty() && config.has_value(); }
};

// Parse and validate a JSON config file. Collects every validation error
// rather than stopping at the first. Missing fields take documented defaults.
ConfigResult load_config(const std::string& path);
ConfigResult parse_config_text(const std::string& text);

}  // namespace logheat
