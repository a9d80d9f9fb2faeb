#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "logheat/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "JSON run configuration");
  sub->add_option("--out", args.out_dir, "output directory (overrides config)");
  sub->add_option("--seed", args.seed, "seed root (overrides config)")
      ->each([&args](const std::string&) { args.seed_set = true; });
  sub->add_option("--workers", args.workers, "worker threads (overrides config)");
}

int execute(logheat::ExperimentKind kind, const CommonArgs& args) {
  logheat::ConfigResult parsed = args.config_path.empty()
                                     ? logheat::parse_config_text("{}")
                                     : logheat::load_config(args.config_path);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) std::cerr << "config error: " << e << "\n";
    return logheat::kExitValidation;
  }
  logheat::RunConfig cfg = std::move(*parsed.config);
  cfg.kind = kind;
  if (args.seed_set) cfg.seed = args.seed;
  if (args.workers > 0) cfg.workers = args.workers;
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  if (const char* env = std::getenv("LOGHEAT_OUT"); env && *env)
    cfg.output_dir = env;

  logheat::RunOutcome outcome = logheat::run(cfg);
  if (!outcome.failure.empty()) std::cerr << outcome.failure << "\n";
  std::cout << logheat::experiment_name(kind) << ": "
            << (outcome.exit_code == logheat::kExitOk ? "ok" : "failed")
            << " (artifacts in " << cfg.output_dir << ")\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectral Galerkin toolkit for the stochastic log-heat equation with "
      "compensated Poisson noise: simulation, skeleton solving, rate-function "
      "estimation, and inequality certification"};
  app.require_subcommand(1);

  struct SubDef {
    const char* name;
    const char* help;
    logheat::ExperimentKind kind;
  };
  const SubDef defs[] = {
      {"simulate", "simulate one SDE path on the jump-adapted grid",
       logheat::ExperimentKind::Simulate},
      {"skeleton", "solve the deterministic controlled equation",
       logheat::ExperimentKind::Skeleton},
      {"rate", "estimate the rate function for a terminal target",
       logheat::ExperimentKind::Rate},
      {"tail", "Monte Carlo tail probabilities over an epsilon list",
       logheat::ExperimentKind::Tail},
      {"ldp1", "controlled-path vs skeleton convergence diagnostic",
       logheat::ExperimentKind::Ldp1},
      {"moments", "ensemble moment estimates at the T_p horizon",
       logheat::ExperimentKind::Moments},
      {"verify", "run every inequality-certification suite",
       logheat::ExperimentKind::Verify},
  };

  CommonArgs args[std::size(defs)];
  for (std::size_t i = 0; i < std::size(defs); ++i) {
    CLI::App* sub = app.add_subcommand(defs[i].name, defs[i].help);
    add_common(sub, args[i]);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < std::size(defs); ++i)
    if (app.get_subcommand(defs[i].name)->parsed())
      return execute(defs[i].kind, args[i]);
  return logheat::kExitValidation;
}
