#pragma once

#include <vector>

#include "logheat/sde.hpp"

namespace logheat {

// Entropy cost of deforming the Poisson intensity by the factor g:
//   L_T(g) = sum_cells sum_atoms dt_cell * w_i * (g log g - g + 1),
// exact for piecewise-constant controls on atomic marks. g = 0 cells
// contribute w * dt * 1.
double entropy_LT(const Control& g, const MarkSpace& ms);

// Deterministic controlled PDE (the skeleton equation): exponential-Euler on
//   du/dt = Delta u + P_n[u log|u|] + sum_i w_i H_i(u) (g(t, z_i) - 1),
// same step kernel as the SDE with zero jumps. The grid is the uniform max_dt
// grid joined with the control cell boundaries. cfg.epsilon is ignored.
TrajectorySample solve_skeleton(const SdeConfig& cfg, const Control& g);

// As above on an explicit, strictly increasing grid from 0 to cfg.horizon
// (used when comparing against a jump-adapted stochastic path).
TrajectorySample solve_skeleton_on_grid(const SdeConfig& cfg, const Control& g,
                                        const std::vector<double>& grid);

struct ControlEnergy {
  double entropy;  // L_T(g)
  double sup_l2_sq;
  double grad_integral;
  double energy() const { return sup_l2_sq + grad_integral; }
};

struct UniformBoundReport {
  std::vector<ControlEnergy> entries;
  double max_energy = 0.0;
  bool all_finite = true;
};

// Energy sup_t ||u_g||_2^2 + int ||u_g||_W^2 dt per control; every control is
// first verified to lie in S_N (entropy <= N).
UniformBoundReport uniform_bound_check(const std::vector<Control>& controls,
                                       const SdeConfig& cfg, double entropy_cap);

// rho_T(u_{g_n}, u_g) for a perturbation sequence g_n -> g on a shared
// parameterization grid.
std::vector<double> continuity_probe(const SdeConfig& cfg, const Control& g,
                                     const std::vector<Control>& sequence);

}  // namespace logheat
