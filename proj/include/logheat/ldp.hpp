#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "logheat/skeleton.hpp"

namespace logheat {

// Terminal-state target event for rate estimation and tail probabilities.
struct TargetFunctional {
  enum class Kind { TerminalBall, TerminalMeanExceedance };
  Kind kind = Kind::TerminalBall;
  SpectralField center;  // TerminalBall
  double radius = 0.0;
  double level = 0.0;  // TerminalMeanExceedance threshold on <u(T), e_1>

  // 0 when the terminal state satisfies the target, positive distance otherwise.
  double violation(const SpectralField& terminal) const;
  bool hit(const SpectralField& terminal) const { return violation(terminal) <= 0.0; }
  void validate() const;
};

struct RateTraceEntry {
  long eval;
  double entropy;
  double violation;
  double objective;
  bool accepted;
};

enum class RateStatus { Converged, BudgetExhausted };

struct RateEstimate {
  double value = std::numeric_limits<double>::infinity();
  Control control{1, 1, 1.0};
  RateStatus status = RateStatus::BudgetExhausted;
  long evaluations = 0;
  std::vector<RateTraceEntry> trace;
};

struct RateOptions {
  int cells = 1;                 // control time cells
  long budget = 20000;           // max skeleton evaluations
  int penalty_rounds = 5;        // multiplicative continuation (x10 per round)
  double penalty_init = 100.0;
  double feasibility_tol = 1e-3;
  int restarts = 2;
  double initial_step = 0.5;
  double min_step = 1e-6;
  bool keep_trace = true;
};

// Rate-function estimate I(target) = inf { L_T(g) : skeleton(g) hits target },
// by derivative-free pattern search with penalty continuation, restarts, and a
// final pull toward g == 1 along the feasible segment. Returns the inf(empty)
// = infinity sentinel with BudgetExhausted status when no feasible control is
// found within the budget.
RateEstimate estimate_rate(const SdeConfig& cfg, const TargetFunctional& target,
                           const RateOptions& opt, std::uint64_t seed);

struct TailPoint {
  double epsilon;
  int paths;
  int hits;
  double p_hat;
  double ci_low;   // Wilson 95%
  double ci_high;
  double eps2_log_p;  // -inf when no hits
  bool undersampled;
};

// Monte Carlo frequency of the target event under the eps-scaled SDE for each
// epsilon, with Wilson confidence intervals and the eps^2 log p sequence.
std::vector<TailPoint> tail_probability(const SdeConfig& cfg,
                                        const TargetFunctional& target,
                                        const std::vector<double>& epsilons,
                                        int paths, std::uint64_t seed_root,
                                        int workers = 1);

struct Ldp1Point {
  double epsilon;
  int paths;
  double mean_rho;
  double ci;  // 99% normal CI half-width
  double exceed_frequency;
};

// Convergence diagnostic for the controlled family: mean rho_T between the
// controlled SDE path and the skeleton solution at each epsilon, plus the
// frequency of rho_T > delta. The skeleton is re-solved on each path's
// jump-adapted grid so the comparison shares an exact time grid.
std::vector<Ldp1Point> ldp1_diagnostic(const SdeConfig& cfg, const Control& phi,
                                       const std::vector<double>& epsilons,
                                       int paths, double delta,
                                       std::uint64_t seed_root, int workers = 1);

}  // namespace logheat
