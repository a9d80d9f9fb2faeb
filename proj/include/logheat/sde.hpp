#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "logheat/control.hpp"
#include "logheat/noise.hpp"
#include "logheat/spectral.hpp"

namespace logheat {

// Finite-dimensional jump SDE in the eigenbasis:
//   dU = Delta U dt + P_n[U log|U|] dt + eps int P_n[eta] dN^{1/eps} - int P_n[eta] m(dz) dt
// Time stepping is exponential-Euler: the diagonal linear flow is exact,
// the logarithmic drift and the compensator are explicit at the left endpoint,
// and jumps are applied at their exact event times.
struct SdeConfig {
  Domain domain;
  int level = 8;
  double horizon = 0.5;
  double max_dt = 1.0 / 128.0;
  SpectralField initial;
  double epsilon = 1.0;  // 1 = unscaled equation; jump intensity scales as 1/eps
  NoiseCoefficient noise;
  MarkSpace marks;
  bool laplacian_on = true;
  bool log_drift_on = true;

  void validate() const;
};

// Expected-event-count guard for the eps-family: paths whose expected jump
// count exceeds this abort with a configuration error.
inline constexpr double kMaxExpectedEvents = 1e7;

// T_p = log(p / (p - 1 + theta)); the horizon on which the p-th moment
// estimate closes.
double tp_horizon(double p, double theta);

// F_i(u) = int e_i(x) u(x) log|u(x)| dx, i = 1..table.level().
SpectralField drift_F(const SpectralField& u, const BasisTable& table);

// H_i(u; z_atom): eta_eval followed by projection to the table level.
SpectralField jump_H(const NoiseCoefficient& nc, const MarkSpace& ms, int atom,
                     const SpectralField& u, const BasisTable& table);

// How the absolutely-continuous noise drift enters the step kernel.
//  - None:          no noise drift (noise disabled)
//  - Compensator:   -sum_i w_i H_i(u)           (SDE modes, any control)
//  - ControlDeviation: +sum_i w_i H_i(u) (g(t, z_i) - 1)   (skeleton equation)
struct NoiseDriftSpec {
  enum class Kind { None, Compensator, ControlDeviation } kind = Kind::Compensator;
  const Control* control = nullptr;  // required for ControlDeviation
};

// One exponential-Euler window [t, t+dt]; jump times must lie in (t, t+dt].
// Each jump adds jump_amplitude * multiplicity * H(u-, atom) at its event time.
SpectralField step(const SpectralField& u, double t, double dt,
                   std::span<const JumpEvent> jumps, const SdeConfig& cfg,
                   const BasisTable& table, const NoiseDriftSpec& drift_spec,
                   double jump_amplitude);

// Convenience overload matching the SDE contract (compensator drift,
// amplitude = epsilon).
SpectralField step(const SpectralField& u, double t, double dt,
                   std::span<const JumpEvent> jumps, const SdeConfig& cfg,
                   const BasisTable& table);

// Full path on the jump-adapted grid (uniform grid + exact jump times).
// Deterministic in (cfg, seed).
TrajectorySample simulate(const SdeConfig& cfg, std::uint64_t seed);

// As simulate, with jump events thinned by phi (intensity phi * eps^{-1} m).
// phi == 1 reproduces simulate seed-for-seed.
TrajectorySample simulate_controlled(const SdeConfig& cfg, const Control& phi,
                                     std::uint64_t seed);

struct MomentEstimate {
  double p = 2.0;
  int paths = 0;
  int blowups = 0;
  // E[sup_t ||u||^p] and E[int ||u||^{p-2} ||u||_W^2 dt] with 99% normal CIs.
  double sup_moment_mean = 0.0;
  double sup_moment_ci = 0.0;
  double energy_mean = 0.0;
  double energy_ci = 0.0;
};

MomentEstimate moment_estimate(const SdeConfig& cfg, double p, int paths,
                               std::uint64_t seed_root, int workers = 1);

// Fan a loop over a thread pool; each index writes only its own results, so
// outcomes are scheduling-independent.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

}  // namespace logheat
