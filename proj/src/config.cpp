#include "logheat/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace logheat {

using nlohmann::json;

ExperimentKind experiment_from_name(const std::string& name) {
  if (name == "simulate") return ExperimentKind::Simulate;
  if (name == "skeleton") return ExperimentKind::Skeleton;
  if (name == "rate") return ExperimentKind::Rate;
  if (name == "tail") return ExperimentKind::Tail;
  if (name == "ldp1") return ExperimentKind::Ldp1;
  if (name == "moments") return ExperimentKind::Moments;
  if (name == "verify") return ExperimentKind::Verify;
  throw ConfigurationError("unknown experiment kind '" + name + "'");
}

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::Skeleton: return "skeleton";
    case ExperimentKind::Rate: return "rate";
    case ExperimentKind::Tail: return "tail";
    case ExperimentKind::Ldp1: return "ldp1";
    case ExperimentKind::Moments: return "moments";
    case ExperimentKind::Verify: return "verify";
  }
  return "?";
}

namespace {

class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(const std::string& path, const std::string& msg) {
    errors_.push_back(path + ": " + msg);
  }

  double number(const json& obj, const std::string& path, const char* key,
                double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      error(path + "." + key, "must be a number");
      return fallback;
    }
    return v.get<double>();
  }

  int integer(const json& obj, const std::string& path, const char* key,
              int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      error(path + "." + key, "must be an integer");
      return fallback;
    }
    return v.get<int>();
  }

  bool boolean(const json& obj, const std::string& path, const char* key,
               bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) {
      error(path + "." + key, "must be a boolean");
      return fallback;
    }
    return v.get<bool>();
  }

  std::string text(const json& obj, const std::string& path, const char* key,
                   const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      error(path + "." + key, "must be a string");
      return fallback;
    }
    return v.get<std::string>();
  }

  std::vector<double> number_list(const json& obj, const std::string& path,
                                  const char* key,
                                  const std::vector<double>& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array()) {
      error(path + "." + key, "must be an array of numbers");
      return fallback;
    }
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) {
        error(path + "." + key, "must be an array of numbers");
        return fallback;
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

 private:
  std::vector<std::string>& errors_;
};

void parse_domain(Reader& r, const json& root, Domain& dom) {
  if (!root.contains("domain")) return;
  const json& d = root.at("domain");
  dom.length = r.number(d, "domain", "length", dom.length);
  dom.quad_nodes = r.integer(d, "domain", "quad_nodes", dom.quad_nodes);
  if (!(dom.length > 0.0)) r.error("domain.length", "must be positive");
  if (dom.quad_nodes < 16) r.error("domain.quad_nodes", "must be >= 16");
}

void parse_marks(Reader& r, const json& root, MarkSpace& ms) {
  if (!root.contains("marks")) return;
  const json& m = root.at("marks");
  if (!m.contains("atoms")) return;
  const json& atoms = m.at("atoms");
  if (!atoms.is_array() || atoms.empty()) {
    r.error("marks.atoms", "must be a nonempty array");
    return;
  }
  ms.atoms.clear();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::string path = "marks.atoms[" + std::to_string(i) + "]";
    MarkAtom a;
    a.weight = r.number(atoms[i], path, "weight", 1.0);
    a.h1 = r.number(atoms[i], path, "h1", 1.0);
    a.h2 = r.number(atoms[i], path, "h2", 1.0);
    if (!(a.weight > 0.0)) r.error(path + ".weight", "must be positive");
    if (!(a.h1 >= 0.0)) r.error(path + ".h1", "must be nonnegative");
    if (!(a.h2 >= 0.0 && a.h2 <= 1.0))
      r.error(path + ".h2", "must lie in [0, 1]");
    ms.atoms.push_back(a);
  }
}

void parse_noise(Reader& r, const json& root, NoiseCoefficient& nc) {
  if (!root.contains("noise")) return;
  const json& n = root.at("noise");
  std::string family = r.text(n, "noise", "family", "tanh");
  try {
    nc.family = noise_family_from_name(family);
  } catch (const ConfigurationError&) {
    r.error("noise.family", "must be one of tanh, softpower, loglip");
  }
  nc.m1 = r.number(n, "noise", "m1", nc.m1);
  nc.m2 = r.number(n, "noise", "m2", nc.m2);
  nc.theta = r.number(n, "noise", "theta", nc.theta);
  nc.k1 = r.number(n, "noise", "k1", nc.k1);
  nc.k2 = r.number(n, "noise", "k2", nc.k2);
  nc.scale = r.number(n, "noise", "scale", nc.scale);
  if (!(nc.m1 >= 0.0)) r.error("noise.m1", "must be nonnegative");
  if (!(nc.m2 >= 0.0)) r.error("noise.m2", "must be nonnegative");
  if (!(nc.theta >= 0.0 && nc.theta < 1.0))
    r.error("noise.theta", "must lie in [0, 1) (sub-linear growth exponent)");
  if (!(nc.k1 >= 0.0)) r.error("noise.k1", "must be nonnegative");
  if (!(nc.k2 >= 0.0)) r.error("noise.k2", "must be nonnegative");
}

void parse_sde(Reader& r, const json& root, SdeConfig& sde) {
  if (!root.contains("sde")) return;
  const json& s = root.at("sde");
  sde.level = r.integer(s, "sde", "level", sde.level);
  sde.horizon = r.number(s, "sde", "horizon", sde.horizon);
  sde.max_dt = r.number(s, "sde", "max_dt", sde.max_dt);
  sde.epsilon = r.number(s, "sde", "epsilon", sde.epsilon);
  sde.laplacian_on = r.boolean(s, "sde", "laplacian", sde.laplacian_on);
  sde.log_drift_on = r.boolean(s, "sde", "log_drift", sde.log_drift_on);
  std::vector<double> init =
      r.number_list(s, "sde", "initial_coeffs", sde.initial.coeffs);
  sde.initial = SpectralField(init);
  if (sde.level < 1) r.error("sde.level", "must be >= 1");
  if (!(sde.horizon > 0.0)) r.error("sde.horizon", "must be positive");
  if (!(sde.max_dt > 0.0)) r.error("sde.max_dt", "must be positive");
  else if (sde.max_dt > sde.horizon)
    r.error("sde.max_dt", "must not exceed the horizon");
  if (!(sde.epsilon > 0.0)) r.error("sde.epsilon", "must be positive");
  for (double c : init)
    if (!std::isfinite(c)) {
      r.error("sde.initial_coeffs", "must be finite");
      break;
    }
}

void parse_control(Reader& r, const json& root, RunConfig& cfg) {
  int atoms = cfg.sde.marks.size();
  int cells = 1;
  double constant = 1.0;
  std::vector<std::vector<double>> rows;
  if (root.contains("control")) {
    const json& c = root.at("control");
    cells = r.integer(c, "control", "cells", 1);
    if (cells < 1) {
      r.error("control.cells", "must be >= 1");
      cells = 1;
    }
    if (c.contains("values")) {
      const json& v = c.at("values");
      if (!v.is_array() || v.empty()) {
        r.error("control.values", "must be a nonempty array of per-cell rows");
      } else {
        for (const auto& row : v) {
          std::vector<double> vals;
          if (row.is_array()) {
            for (const auto& e : row)
              vals.push_back(e.is_number() ? e.get<double>()
                                           : (r.error("control.values",
                                                      "entries must be numbers"),
                                              0.0));
          } else {
            r.error("control.values", "rows must be arrays");
          }
          rows.push_back(vals);
        }
        cells = static_cast<int>(rows.size());
      }
    } else {
      constant = r.number(c, "control", "constant", 1.0);
    }
  }
  std::vector<double> flat;
  if (!rows.empty()) {
    for (std::size_t c = 0; c < rows.size(); ++c) {
      if (static_cast<int>(rows[c].size()) != atoms) {
        r.error("control.values[" + std::to_string(c) + "]",
                "row length must equal the number of mark atoms");
        rows[c].resize(static_cast<std::size_t>(atoms), 1.0);
      }
      for (double v : rows[c]) flat.push_back(v);
    }
  } else {
    flat.assign(static_cast<std::size_t>(cells) * atoms, constant);
  }
  for (std::size_t i = 0; i < flat.size(); ++i)
    if (!(flat[i] >= 0.0) || !std::isfinite(flat[i])) {
      r.error("control.values", "must be nonnegative and finite");
      flat[i] = 0.0;
    }
  double horizon = cfg.sde.horizon > 0.0 ? cfg.sde.horizon : 1.0;
  cfg.control = Control(cells, std::max(1, atoms), horizon, std::move(flat));
}

void parse_target(Reader& r, const json& root, RunConfig& cfg) {
  cfg.target.kind = TargetFunctional::Kind::TerminalMeanExceedance;
  cfg.target.level = 0.0;
  if (!root.contains("target")) return;
  const json& t = root.at("target");
  std::string kind = r.text(t, "target", "kind", "terminal_mean_exceedance");
  if (kind == "terminal_ball") {
    cfg.target.kind = TargetFunctional::Kind::TerminalBall;
    cfg.target.center =
        SpectralField(r.number_list(t, "target", "center_coeffs", {}));
    cfg.target.radius = r.number(t, "target", "radius", 0.0);
    if (!(cfg.target.radius >= 0.0)) r.error("target.radius", "must be nonnegative");
  } else if (kind == "terminal_mean_exceedance") {
    cfg.target.kind = TargetFunctional::Kind::TerminalMeanExceedance;
    cfg.target.level = r.number(t, "target", "level", 0.0);
  } else {
    r.error("target.kind",
            "must be terminal_ball or terminal_mean_exceedance");
  }
}

void parse_rest(Reader& r, const json& root, RunConfig& cfg) {
  if (root.contains("rate")) {
    const json& j = root.at("rate");
    cfg.rate.cells = r.integer(j, "rate", "cells", cfg.rate.cells);
    cfg.rate.budget = r.integer(j, "rate", "budget", static_cast<int>(cfg.rate.budget));
    cfg.rate.penalty_rounds =
        r.integer(j, "rate", "penalty_rounds", cfg.rate.penalty_rounds);
    cfg.rate.penalty_init = r.number(j, "rate", "penalty_init", cfg.rate.penalty_init);
    cfg.rate.feasibility_tol =
        r.number(j, "rate", "feasibility_tol", cfg.rate.feasibility_tol);
    cfg.rate.restarts = r.integer(j, "rate", "restarts", cfg.rate.restarts);
    if (cfg.rate.cells < 1) r.error("rate.cells", "must be >= 1");
    if (cfg.rate.budget < 0) r.error("rate.budget", "must be nonnegative");
    if (!(cfg.rate.feasibility_tol > 0.0))
      r.error("rate.feasibility_tol", "must be positive");
  }
  if (root.contains("tail")) {
    const json& j = root.at("tail");
    cfg.tail.epsilons = r.number_list(j, "tail", "epsilons", cfg.tail.epsilons);
    cfg.tail.paths = r.integer(j, "tail", "paths", cfg.tail.paths);
    if (cfg.tail.paths < 100) r.error("tail.paths", "must be >= 100");
    for (double e : cfg.tail.epsilons)
      if (!(e > 0.0)) {
        r.error("tail.epsilons", "must be positive");
        break;
      }
  }
  if (root.contains("ldp1")) {
    const json& j = root.at("ldp1");
    cfg.ldp1.epsilons = r.number_list(j, "ldp1", "epsilons", cfg.ldp1.epsilons);
    cfg.ldp1.paths = r.integer(j, "ldp1", "paths", cfg.ldp1.paths);
    cfg.ldp1.delta = r.number(j, "ldp1", "delta", cfg.ldp1.delta);
    if (cfg.ldp1.paths < 1) r.error("ldp1.paths", "must be >= 1");
    if (!(cfg.ldp1.delta > 0.0)) r.error("ldp1.delta", "must be positive");
  }
  if (root.contains("moments")) {
    const json& j = root.at("moments");
    cfg.moments.p = r.number(j, "moments", "p", cfg.moments.p);
    cfg.moments.paths = r.integer(j, "moments", "paths", cfg.moments.paths);
    std::vector<double> lv;
    for (int l : cfg.moments.levels) lv.push_back(l);
    lv = r.number_list(j, "moments", "levels", lv);
    cfg.moments.levels.clear();
    for (double l : lv) cfg.moments.levels.push_back(static_cast<int>(l));
    if (!(cfg.moments.p >= 2.0)) r.error("moments.p", "must be >= 2");
    if (cfg.moments.paths < 1) r.error("moments.paths", "must be >= 1");
    for (int l : cfg.moments.levels)
      if (l < 1) {
        r.error("moments.levels", "must be >= 1");
        break;
      }
  }
  if (root.contains("verify")) {
    const json& j = root.at("verify");
    cfg.verify.sobolev_instances =
        r.integer(j, "verify", "sobolev_instances", cfg.verify.sobolev_instances);
    cfg.verify.difference_instances =
        r.integer(j, "verify", "difference_instances", cfg.verify.difference_instances);
    cfg.verify.gronwall_instances =
        r.integer(j, "verify", "gronwall_instances", cfg.verify.gronwall_instances);
    cfg.verify.noise_samples =
        r.integer(j, "verify", "noise_samples", cfg.verify.noise_samples);
    cfg.verify.entropy_pairs =
        r.integer(j, "verify", "entropy_pairs", cfg.verify.entropy_pairs);
  }
}

}  // namespace

ConfigResult parse_config_text(const std::string& text) {
  ConfigResult result;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    result.errors.push_back(std::string("parse error: ") + e.what());
    return result;
  }
  if (!root.is_object()) {
    result.errors.push_back("config: top level must be a JSON object");
    return result;
  }

  Reader r(result.errors);
  RunConfig cfg;
  cfg.sde.marks.atoms = {{1.0, 0.5, 0.5}};
  cfg.sde.initial = SpectralField(std::vector<double>{1.0});

  std::string kind = r.text(root, "config", "experiment", "simulate");
  try {
    cfg.kind = experiment_from_name(kind);
  } catch (const ConfigurationError&) {
    r.error("experiment",
            "must be one of simulate, skeleton, rate, tail, ldp1, moments, verify");
  }
  double seed = r.number(root, "config", "seed", 42.0);
  if (!(seed >= 0.0)) r.error("seed", "must be nonnegative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.output_dir = r.text(root, "config", "output_dir", cfg.output_dir);
  cfg.workers = r.integer(root, "config", "workers", cfg.workers);
  if (cfg.workers < 1) r.error("workers", "must be >= 1");

  parse_domain(r, root, cfg.sde.domain);
  parse_marks(r, root, cfg.sde.marks);
  parse_noise(r, root, cfg.sde.noise);
  parse_sde(r, root, cfg.sde);
  parse_control(r, root, cfg);
  parse_target(r, root, cfg);
  parse_rest(r, root, cfg);

  if (!result.errors.empty()) return result;

  // Final cross-checks through the module validators.
  try {
    cfg.sde.validate();
    cfg.control.validate();
    cfg.target.validate();
  } catch (const std::exception& e) {
    result.errors.push_back(e.what());
    return result;
  }

  json canon = root;
  canon["experiment"] = experiment_name(cfg.kind);
  cfg.canonical_text = canon.dump();
  result.config = std::move(cfg);
  return result;
}

ConfigResult load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigResult r;
    r.errors.push_back("config: cannot open '" + path + "'");
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace logheat
