#include "logheat/skeleton.hpp"

#include <algorithm>
#include <cmath>

namespace logheat {

namespace {

double entropy_integrand(double g) {
  if (g < 0.0) throw ParameterError("entropy: control values must be nonnegative");
  if (g < kLogFloor) return 1.0;  // 0 log 0 - 0 + 1
  return g * std::log(g) - g + 1.0;
}

}  // namespace

double entropy_LT(const Control& g, const MarkSpace& ms) {
  g.validate();
  ms.validate();
  if (g.atoms() != ms.size())
    throw ConfigurationError("entropy: control atoms do not match the mark space");
  double dt = g.cell_width();
  double acc = 0.0;
  for (int c = 0; c < g.cells(); ++c)
    for (int i = 0; i < g.atoms(); ++i)
      acc += dt * ms.atoms[static_cast<std::size_t>(i)].weight *
             entropy_integrand(g.value(c, i));
  return acc;
}

TrajectorySample solve_skeleton_on_grid(const SdeConfig& cfg, const Control& g,
                                        const std::vector<double>& grid) {
  cfg.validate();
  g.validate();
  if (g.atoms() != cfg.marks.size())
    throw ConfigurationError("skeleton: control atoms do not match the mark space");
  if (grid.size() < 2 || grid.front() != 0.0 ||
      std::fabs(grid.back() - cfg.horizon) > 1e-12)
    throw ParameterError("skeleton: grid must run from 0 to the horizon");

  BasisTable table(cfg.domain, cfg.level);
  NoiseDriftSpec spec{NoiseDriftSpec::Kind::ControlDeviation, &g};
  SpectralField state = project(cfg.initial, cfg.level);
  state.coeffs.resize(static_cast<std::size_t>(cfg.level), 0.0);

  TrajectorySample traj;
  traj.append(grid[0], state, false);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    double dt = grid[k] - grid[k - 1];
    state = step(state, grid[k - 1], dt, {}, cfg, table, spec, 0.0);
    traj.append(grid[k], state, false);
  }
  return traj;
}

TrajectorySample solve_skeleton(const SdeConfig& cfg, const Control& g) {
  if (cfg.max_dt > g.cell_width() + 1e-12)
    throw ParameterError("skeleton: max_dt must not exceed the control cell width");
  int n = static_cast<int>(std::ceil(cfg.horizon / cfg.max_dt - 1e-12));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n + g.cells()) + 1);
  for (int k = 0; k <= n; ++k)
    grid.push_back(cfg.horizon * static_cast<double>(k) / static_cast<double>(n));
  for (int c = 1; c < g.cells(); ++c)
    grid.push_back(g.cell_width() * static_cast<double>(c));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return solve_skeleton_on_grid(cfg, g, grid);
}

UniformBoundReport uniform_bound_check(const std::vector<Control>& controls,
                                       const SdeConfig& cfg, double entropy_cap) {
  UniformBoundReport report;
  for (const auto& g : controls) {
    double lt = entropy_LT(g, cfg.marks);
    if (lt > entropy_cap + 1e-12)
      throw ConfigurationError("uniform_bound_check: control outside S_N");
    TrajectorySample traj = solve_skeleton(cfg, g);
    ControlEnergy e{lt, 0.0, 0.0};
    for (std::size_t i = 0; i < traj.size(); ++i) {
      double l2 = traj.states[i].l2_norm_sq();
      e.sup_l2_sq = std::max(e.sup_l2_sq, l2);
      if (i + 1 < traj.size())
        e.grad_integral += (traj.times[i + 1] - traj.times[i]) *
                           traj.states[i].sobolev_norm_sq(cfg.domain);
    }
    report.all_finite = report.all_finite && std::isfinite(e.energy());
    report.max_energy = std::max(report.max_energy, e.energy());
    report.entries.push_back(e);
  }
  return report;
}

std::vector<double> continuity_probe(const SdeConfig& cfg, const Control& g,
                                     const std::vector<Control>& sequence) {
  TrajectorySample base = solve_skeleton(cfg, g);
  std::vector<double> gaps;
  gaps.reserve(sequence.size());
  for (const auto& gn : sequence) {
    if (gn.cells() != g.cells() || gn.atoms() != g.atoms())
      throw ConfigurationError("continuity_probe: sequence must share the grid of g");
    TrajectorySample traj = solve_skeleton(cfg, gn);
    gaps.push_back(path_metric(traj, base, 0.0, cfg.horizon, cfg.domain));
  }
  return gaps;
}

}  // namespace logheat
