// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerance and runtime budget in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "logheat/comparison_ode.hpp"
#include "logheat/ldp.hpp"
#include "logheat/rng.hpp"
#include "logheat/runner.hpp"

using namespace logheat;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& desc, bool ok, double seconds) {
  std::printf("[%s] criterion %2d: %s (%.2fs)\n", ok ? "PASS" : "FAIL", id,
              desc.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void run_criterion(int id, const std::string& desc, double time_limit_s,
                   const std::function<bool()>& body) {
  auto start = std::chrono::steady_clock::now();
  bool ok = false;
  std::string note;
  try {
    ok = body();
  } catch (const std::exception& e) {
    note = e.what();
    ok = false;
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0.0 && secs > time_limit_s) ok = false;
  report(id, desc + (note.empty() ? "" : " [" + note + "]"), ok, secs);
}

SdeConfig default_sde() {
  SdeConfig cfg;
  cfg.domain.quad_nodes = 256;
  cfg.level = 8;
  cfg.horizon = 0.5;
  cfg.max_dt = 1.0 / 128.0;
  cfg.initial = SpectralField(std::vector<double>{1.0});
  cfg.epsilon = 1.0;
  cfg.noise.family = NoiseFamily::Tanh;
  cfg.noise.m1 = 0.5;
  cfg.noise.m2 = 0.5;
  cfg.noise.k1 = 0.5;
  cfg.marks.atoms = {{1.0, 0.5, 0.5}, {0.5, 0.25, 0.25}};
  return cfg;
}

bool criterion1_linear_exactness() {
  SdeConfig cfg = default_sde();
  cfg.log_drift_on = false;
  cfg.noise.m1 = 0.0;
  cfg.noise.m2 = 0.0;
  TrajectorySample traj = simulate(cfg, 42);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (size_t i = 0; i < traj.size(); ++i) {
    if (std::fabs(traj.states[i].coeffs[0] - std::exp(-pi2 * traj.times[i])) > 1e-12)
      return false;
    for (int j = 1; j < cfg.level; ++j)
      if (traj.states[i].coeffs[size_t(j)] != 0.0) return false;
  }
  return true;
}

bool criterion2_inequality_certification() {
  Domain dom;
  BasisTable table(dom, 16);
  CounterRng rng(90210, 0, 0);
  auto random_field = [&]() {
    int n = 1 + int(rng.next_below(16));
    SpectralField u(n);
    for (auto& c : u.coeffs) c = rng.next_range(-5.0, 5.0);
    return u;
  };
  const double eps_grid[3] = {0.1, 0.5, 1.0};
  for (int i = 0; i < 1000; ++i) {
    if (log_sobolev_gap(random_field(), eps_grid[i % 3], table) < -1e-8) return false;
    if (log_sobolev_plus_gap(random_field(), eps_grid[i % 3], table) < -1e-8)
      return false;
  }
  const double pair_eps[2] = {0.25, 1.0};
  const double pair_alpha[2] = {0.3, 0.7};
  for (int i = 0; i < 500; ++i) {
    BoundPair b = log_diff_pairing_bound(random_field(), random_field(),
                                         pair_eps[i % 2], pair_alpha[(i / 2) % 2],
                                         table);
    if (b.gap() < -1e-8) return false;
  }
  for (int i = 0; i < 500; ++i) {
    BoundPair b = log_plus_weighted_bound(random_field(), random_field(),
                                          pair_eps[i % 2], pair_alpha[(i / 2) % 2],
                                          table);
    if (b.gap() < -1e-8) return false;
  }
  return true;
}

bool criterion3_gronwall_oracles() {
  // spot values first
  GronwallInputs spot;
  spot.times = {0.0, 0.5, 1.0};
  spot.C = 1.0;
  spot.alpha = 0.5;
  spot.f = {0.0, 0.0, 0.0};
  spot.g = {1.0, 1.0, 1.0};
  if (std::fabs(nonlinear_gronwall_bound(spot) - 2.25) > 1e-12) return false;

  LogGronwallInputs lspot;
  lspot.times = {0.0, 0.5, 1.0};
  lspot.h = {std::numbers::e, std::numbers::e, std::numbers::e};
  lspot.f = {0.0, 0.0, 0.0};
  lspot.g = {1.0, 1.0, 1.0};
  lspot.a = {0.0, 0.0, 0.0};
  if (std::fabs(log_gronwall_bound(lspot) - std::exp(std::numbers::e)) > 1e-12)
    return false;

  CounterRng rng(5150, 0, 0);
  auto grid = [](double t0, double t1) {
    std::vector<double> t(2049);
    for (int i = 0; i <= 2048; ++i) t[size_t(i)] = t0 + (t1 - t0) * i / 2048.0;
    return t;
  };
  auto smooth = [&](const std::vector<double>& times) {
    double a = rng.next_range(0.0, 1.0), b = rng.next_range(0.0, 1.0);
    double w = rng.next_range(0.0, std::numbers::pi);
    double ph = rng.next_range(0.0, 2.0 * std::numbers::pi);
    std::vector<double> v(times.size());
    for (size_t i = 0; i < times.size(); ++i)
      v[i] = std::max(0.0, a + b * std::sin(w * times[i] + ph));
    return v;
  };
  for (int i = 0; i < 100; ++i) {
    GronwallInputs in;
    double t0 = rng.next_range(0.0, 0.5);
    in.times = grid(t0, t0 + rng.next_range(0.5, 1.0));
    in.C = rng.next_range(0.1, 2.0);
    in.alpha = rng.next_range(0.0, 0.9);
    in.f = smooth(in.times);
    in.g = smooth(in.times);
    double bound = nonlinear_gronwall_bound(in);
    double ode = gronwall_equality_solution(in, 4);
    if (bound - ode < -1e-6 * std::max(1.0, std::fabs(ode))) return false;
  }
  for (int i = 0; i < 100; ++i) {
    LogGronwallInputs in;
    in.times = grid(0.0, rng.next_range(0.25, 1.0));
    in.f = smooth(in.times);
    in.g = smooth(in.times);
    in.a.assign(in.times.size(), 0.0);
    in.h.resize(in.times.size());
    in.h[0] = rng.next_range(1.0, 2.0);
    double slope = rng.next_range(0.0, 1.0);
    for (size_t k = 1; k < in.h.size(); ++k)
      in.h[k] = in.h[k - 1] + slope * (in.times[k] - in.times[k - 1]);
    double bound = log_gronwall_bound(in);
    double ode = log_gronwall_equality_solution(in, 4);
    if (bound - ode < -1e-6 * std::max(1.0, std::fabs(ode))) return false;
  }
  return true;
}

bool criterion4_moment_suite() {
  SdeConfig cfg = default_sde();
  cfg.horizon = tp_horizon(2.0, cfg.noise.theta);  // log 2 at theta = 0
  cfg.max_dt = 1.0 / 64.0;
  if (std::fabs(cfg.horizon - std::log(2.0)) > 1e-15) return false;

  MomentEstimate m8, m16;
  {
    SdeConfig c = cfg;
    c.level = 8;
    m8 = moment_estimate(c, 2.0, 2000, 777, 2);
  }
  {
    SdeConfig c = cfg;
    c.level = 16;
    m16 = moment_estimate(c, 2.0, 2000, 777, 2);
  }
  if (m8.blowups != 0 || m16.blowups != 0) return false;
  return std::fabs(m8.sup_moment_mean - m16.sup_moment_mean) <
         0.05 * m16.sup_moment_mean;
}

bool criterion5_uniqueness_surrogate() {
  CounterRng rng(424242, 0, 0);
  for (int trial = 0; trial < 100; ++trial) {
    SdeConfig cfg;
    cfg.domain.quad_nodes = 128;
    cfg.level = 2 + int(rng.next_below(8));
    cfg.horizon = rng.next_range(0.1, 0.4);
    cfg.max_dt = cfg.horizon / double(8 + int(rng.next_below(24)));
    cfg.epsilon = rng.next_range(0.5, 1.5);
    cfg.noise.family = trial % 3 == 0   ? NoiseFamily::Tanh
                       : trial % 3 == 1 ? NoiseFamily::SoftPower
                                        : NoiseFamily::LogLip;
    cfg.noise.m1 = rng.next_range(0.0, 0.8);
    cfg.noise.m2 = rng.next_range(0.0, 0.8);
    cfg.noise.theta = rng.next_range(0.0, 0.5);
    int atoms = 1 + int(rng.next_below(3));
    cfg.marks.atoms.clear();
    for (int a = 0; a < atoms; ++a)
      cfg.marks.atoms.push_back(
          {rng.next_range(0.2, 1.5), rng.next_range(0.0, 0.8), rng.next_range(0.0, 1.0)});
    std::vector<double> init(size_t(cfg.level));
    for (auto& c : init) c = rng.next_range(-1.0, 1.0);
    cfg.initial = SpectralField(init);

    std::uint64_t seed = rng.next_u64();
    TrajectorySample a = simulate(cfg, seed);
    TrajectorySample b = simulate(cfg, seed);
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
      if (a.times[i] != b.times[i] || a.jump_flags[i] != b.jump_flags[i])
        return false;
      for (int j = 0; j < cfg.level; ++j)
        if (a.states[i].coeffs[size_t(j)] != b.states[i].coeffs[size_t(j)])
          return false;
    }
  }
  return true;
}

bool criterion6_entropy_functional() {
  MarkSpace unit;
  unit.atoms = {{1.0, 0.5, 0.5}};
  if (entropy_LT(Control::constant(1.0, 3, 1, 1.0), unit) != 0.0) return false;
  double two = entropy_LT(Control::constant(2.0, 1, 1, 1.0), unit);
  if (std::fabs(two - (2.0 * std::log(2.0) - 1.0)) > 1e-12) return false;

  MarkSpace ms;
  ms.atoms = {{1.5, 0.5, 0.5}, {0.75, 0.25, 0.25}};
  CounterRng rng(1618, 0, 0);
  for (int i = 0; i < 200; ++i) {
    int cells = 1 + int(rng.next_below(4));
    Control a(cells, 2, 1.0, 1.0), b(cells, 2, 1.0, 1.0), mid(cells, 2, 1.0, 1.0);
    for (int c = 0; c < cells; ++c)
      for (int j = 0; j < 2; ++j) {
        a.value(c, j) = rng.next_range(0.0, 4.0);
        b.value(c, j) = rng.next_range(0.0, 4.0);
        mid.value(c, j) = 0.5 * (a.value(c, j) + b.value(c, j));
      }
    if (entropy_LT(mid, ms) >
        0.5 * (entropy_LT(a, ms) + entropy_LT(b, ms)) + 1e-12)
      return false;
  }
  return true;
}

bool criterion7_ldp2_surrogate() {
  SdeConfig cfg = default_sde();
  cfg.horizon = 0.4;
  Control g = Control::constant(1.0, 2, cfg.marks.size(), cfg.horizon);
  g.value(0, 0) = 1.5;
  g.value(1, 1) = 0.75;
  std::vector<Control> seq;
  for (int n : {1, 2, 4, 8}) {
    Control gn = g;
    for (int c = 0; c < gn.cells(); ++c)
      gn.value(c, 0) = g.value(c, 0) + 1.0 / double(n);
    seq.push_back(gn);
  }
  std::vector<double> gaps = continuity_probe(cfg, g, seq);
  for (size_t i = 0; i + 1 < gaps.size(); ++i)
    if (!(gaps[i + 1] < gaps[i])) return false;
  return true;
}

bool criterion8_ldp1_surrogate() {
  SdeConfig cfg;
  cfg.domain.quad_nodes = 128;
  cfg.level = 6;
  cfg.horizon = 0.3;
  cfg.max_dt = 1.0 / 64.0;
  cfg.initial = SpectralField(std::vector<double>{0.5});
  cfg.noise.m1 = 0.5;
  cfg.noise.m2 = 0.5;
  cfg.marks.atoms = {{1.0, 0.5, 0.5}};
  Control one = Control::constant(1.0, 1, 1, cfg.horizon);
  auto pts = ldp1_diagnostic(cfg, one, {0.4, 0.2, 0.1, 0.05}, 500, 0.5, 360, 2);
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    if (!(pts[i + 1].mean_rho < pts[i].mean_rho)) return false;
  return pts.back().exceed_frequency == 0.0;
}

bool criterion9_rate_oracle_equivalence() {
  SdeConfig cfg;
  cfg.domain.quad_nodes = 128;
  cfg.level = 6;
  cfg.horizon = 0.3;
  cfg.max_dt = 1.0 / 64.0;
  cfg.initial = SpectralField(std::vector<double>{0.5});
  cfg.noise.m1 = 0.5;
  cfg.noise.m2 = 0.5;
  cfg.marks.atoms = {{1.0, 0.5, 0.5}};

  RateOptions opt;
  opt.cells = 1;
  opt.budget = 20000;

  // zero-cost feasible point
  Control one = Control::constant(1.0, 1, 1, cfg.horizon);
  TrajectorySample base = solve_skeleton(cfg, one);
  TargetFunctional easy;
  easy.kind = TargetFunctional::Kind::TerminalBall;
  easy.center = base.states.back();
  easy.radius = 0.05;
  RateEstimate zero = estimate_rate(cfg, easy, opt, 3);
  if (zero.status != RateStatus::Converged) return false;
  if (std::fabs(zero.value) > 1e-12) return false;
  for (int c = 0; c < zero.control.cells(); ++c)
    if (std::fabs(zero.control.value(c, 0) - 1.0) > 1e-9) return false;

  TargetFunctional target;
  target.kind = TargetFunctional::Kind::TerminalMeanExceedance;
  target.level = 0.045;
  RateEstimate est = estimate_rate(cfg, target, opt, 11);
  if (est.status != RateStatus::Converged) return false;

  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 6000; ++k) {
    Control g = Control::constant(k * 1e-3, 1, 1, cfg.horizon);
    TrajectorySample traj = solve_skeleton(cfg, g);
    if (target.violation(traj.states.back()) <= opt.feasibility_tol)
      best = std::min(best, entropy_LT(g, cfg.marks));
  }
  return std::isfinite(best) && std::fabs(est.value - best) < 1e-3;
}

bool criterion10_thinning_correctness() {
  MarkSpace ms;
  ms.atoms = {{2.0, 0.5, 0.5}, {1.0, 0.25, 0.25}};
  const double horizon = 1.0, base = 1.0;
  const int seeds = 10000;
  for (double phi_val : {0.0, 1.0, 2.0}) {
    Control phi = Control::constant(phi_val, 2, ms.size(), horizon);
    std::vector<double> counts(size_t(ms.size()), 0.0);
    for (int s = 0; s < seeds; ++s)
      for (const auto& ev : sample_controlled_prm(ms, horizon, base, phi, uint64_t(s)))
        counts[size_t(ev.atom)] += 1.0;
    for (int i = 0; i < ms.size(); ++i) {
      double lambda = phi_val * base * ms.atoms[size_t(i)].weight * horizon;
      double mean = counts[size_t(i)] / seeds;
      if (lambda == 0.0) {
        if (mean != 0.0) return false;
      } else if (std::fabs(mean - lambda) > 3.0 * std::sqrt(lambda / seeds)) {
        return false;
      }
    }
  }
  return true;
}

bool criterion11_reproducibility() {
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const char* configs[] = {
      R"({"experiment": "simulate", "seed": 7,
          "sde": {"level": 6, "horizon": 0.25, "max_dt": 0.015625}})",
      R"({"experiment": "tail", "seed": 9,
          "target": {"kind": "terminal_mean_exceedance", "level": -100.0},
          "tail": {"epsilons": [0.4, 0.2], "paths": 120},
          "sde": {"level": 4, "horizon": 0.2, "max_dt": 0.025}})",
      R"({"experiment": "ldp1", "seed": 5,
          "ldp1": {"epsilons": [0.4, 0.2], "paths": 50, "delta": 0.5},
          "sde": {"level": 4, "horizon": 0.2, "max_dt": 0.025}})",
  };
  for (const char* text : configs) {
    ConfigResult parsed = parse_config_text(text);
    if (!parsed.ok()) return false;
    RunConfig cfg = *parsed.config;
    fs::path dir_a = fs::temp_directory_path() / "logheat_accept_a";
    fs::path dir_b = fs::temp_directory_path() / "logheat_accept_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    cfg.workers = 1;
    cfg.output_dir = dir_a.string();
    RunOutcome a = run(cfg);
    cfg.workers = 2;  // scheduling independence folded into the same criterion
    cfg.output_dir = dir_b.string();
    RunOutcome b = run(cfg);
    if (a.exit_code != kExitOk || b.exit_code != kExitOk) return false;
    if (a.artifacts != b.artifacts) return false;
    for (const auto& name : a.artifacts)
      if (slurp(dir_a / name) != slurp(dir_b / name)) return false;
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
  }
  return true;
}

}  // namespace

int main() {
  std::printf("acceptance suite (tolerances pinned in code)\n");
  run_criterion(1, "linear exactness: heat decay to 1e-12", 1.0,
                criterion1_linear_exactness);
  run_criterion(2, "inequality certification: 1000/500/500 instances, gap >= -1e-8",
                60.0, criterion2_inequality_certification);
  run_criterion(3, "Gronwall bounds dominate RK4 equality cases, margin >= -1e-6",
                60.0, criterion3_gronwall_oracles);
  run_criterion(4, "moment suite at T_2 = log 2: no blow-ups, levels within 5%",
                600.0, criterion4_moment_suite);
  run_criterion(5, "pathwise uniqueness surrogate: 100 seed-matched reruns identical",
                120.0, criterion5_uniqueness_surrogate);
  run_criterion(6, "entropy functional: spot values exact, midpoint convexity", 30.0,
                criterion6_entropy_functional);
  run_criterion(7, "control continuity: dyadic perturbations contract", 60.0,
                criterion7_ldp2_surrogate);
  run_criterion(8, "small-noise convergence: mean rho decreasing, exceedance zero",
                900.0, criterion8_ldp1_surrogate);
  run_criterion(9, "rate estimate within 1e-3 of exhaustive grid search", 120.0,
                criterion9_rate_oracle_equivalence);
  run_criterion(10, "thinning: per-atom counts within 3 sigma of Poisson means",
                60.0, criterion10_thinning_correctness);
  run_criterion(11, "reproducibility: byte-identical artifacts across reruns", 120.0,
                criterion11_reproducibility);

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
