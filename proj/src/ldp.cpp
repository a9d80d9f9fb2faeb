#include "logheat/ldp.hpp"

#include <algorithm>
#include <cmath>

#include "logheat/rng.hpp"

namespace logheat {

double TargetFunctional::violation(const SpectralField& terminal) const {
  switch (kind) {
    case Kind::TerminalBall: {
      double d2 = 0.0;
      std::size_t n = std::max(terminal.coeffs.size(), center.coeffs.size());
      for (std::size_t j = 0; j < n; ++j) {
        double a = j < terminal.coeffs.size() ? terminal.coeffs[j] : 0.0;
        double b = j < center.coeffs.size() ? center.coeffs[j] : 0.0;
        d2 += (a - b) * (a - b);
      }
      return std::max(0.0, std::sqrt(d2) - radius);
    }
    case Kind::TerminalMeanExceedance: {
      double mean = terminal.coeffs.empty() ? 0.0 : terminal.coeffs[0];
      return std::max(0.0, level - mean);
    }
  }
  return 0.0;
}

void TargetFunctional::validate() const {
  if (kind == Kind::TerminalBall) {
    if (!(radius >= 0.0) || !std::isfinite(radius))
      throw ConfigurationError("target: radius must be nonnegative and finite");
    if (!center.finite()) throw ConfigurationError("target: center must be finite");
  } else {
    if (!std::isfinite(level))
      throw ConfigurationError("target: level must be finite");
  }
}

namespace {

struct Evaluation {
  double entropy;
  double violation;
};

class RateSearch {
 public:
  RateSearch(const SdeConfig& cfg, const TargetFunctional& target,
             const RateOptions& opt)
      : cfg_(cfg), target_(target), opt_(opt) {}

  Evaluation evaluate(const Control& g, double mu, std::vector<RateTraceEntry>* trace,
                      bool accepted) {
    ++evals_;
    TrajectorySample traj = solve_skeleton(cfg_, g);
    Evaluation e{entropy_LT(g, cfg_.marks), target_.violation(traj.states.back())};
    if (trace && opt_.keep_trace)
      trace->push_back({evals_, e.entropy, e.violation,
                        e.entropy + mu * e.violation * e.violation, accepted});
    return e;
  }

  long evals() const { return evals_; }
  bool budget_left() const { return evals_ < opt_.budget; }

 private:
  const SdeConfig& cfg_;
  const TargetFunctional& target_;
  const RateOptions& opt_;
  long evals_ = 0;
};

double objective(const Evaluation& e, double mu) {
  return e.entropy + mu * e.violation * e.violation;
}

// Compass pattern search on the objective from `start`; coordinates clipped
// at 0. Stops when the step shrinks below min_step or the budget runs out.
Control pattern_search(RateSearch& search, Control start, double mu,
                       const RateOptions& opt, std::vector<RateTraceEntry>* trace,
                       Evaluation& best_eval) {
  Control best = std::move(start);
  best_eval = search.evaluate(best, mu, trace, true);
  double best_obj = objective(best_eval, mu);
  double step_size = opt.initial_step;
  const int dims = best.cells() * best.atoms();
  while (step_size >= opt.min_step && search.budget_left()) {
    bool improved = false;
    for (int d = 0; d < dims && search.budget_left(); ++d) {
      int c = d / best.atoms();
      int i = d % best.atoms();
      for (double sgn : {+1.0, -1.0}) {
        if (!search.budget_left()) break;
        Control cand = best;
        double v = cand.value(c, i) + sgn * step_size;
        if (v < 0.0) v = 0.0;
        if (v == cand.value(c, i)) continue;
        cand.value(c, i) = v;
        Evaluation e = search.evaluate(cand, mu, trace, false);
        double obj = objective(e, mu);
        if (obj < best_obj - 1e-15) {
          best = std::move(cand);
          best_obj = obj;
          best_eval = e;
          improved = true;
          if (trace && !trace->empty()) trace->back().accepted = true;
          break;
        }
      }
    }
    if (!improved) step_size *= 0.5;
  }
  return best;
}

}  // namespace

RateEstimate estimate_rate(const SdeConfig& cfg, const TargetFunctional& target,
                           const RateOptions& opt, std::uint64_t seed) {
  cfg.validate();
  target.validate();
  if (opt.cells < 1) throw ConfigurationError("estimate_rate: cells must be >= 1");

  RateEstimate out;
  out.control = Control::constant(1.0, opt.cells, cfg.marks.size(), cfg.horizon);
  if (opt.budget <= 0) return out;  // value = inf, budget exhausted

  RateSearch search(cfg, target, opt);
  CounterRng rng(seed, 0x72617465ULL, 0);

  Control best = out.control;
  Evaluation best_eval{0.0, std::numeric_limits<double>::infinity()};
  bool have_best = false;

  const double tol = opt.feasibility_tol;
  for (int attempt = 0; attempt <= opt.restarts && search.budget_left(); ++attempt) {
    Control start = Control::constant(1.0, opt.cells, cfg.marks.size(), cfg.horizon);
    if (attempt > 0) {
      for (int c = 0; c < start.cells(); ++c)
        for (int i = 0; i < start.atoms(); ++i)
          start.value(c, i) = rng.next_range(0.0, 3.0);
    }
    // Feasibility push: minimize the violation alone.
    Evaluation eval{};
    Control point = start;
    eval = search.evaluate(point, 0.0, &out.trace, true);
    if (eval.violation > tol && search.budget_left()) {
      auto feas_obj = [&](const Control& g, Evaluation& e) {
        e = search.evaluate(g, 1.0, &out.trace, false);
        return e.violation;
      };
      double step_size = opt.initial_step;
      double best_v = eval.violation;
      while (step_size >= opt.min_step && best_v > tol && search.budget_left()) {
        bool improved = false;
        for (int d = 0; d < point.cells() * point.atoms() && search.budget_left();
             ++d) {
          int c = d / point.atoms();
          int i = d % point.atoms();
          for (double sgn : {+1.0, -1.0}) {
            if (!search.budget_left()) break;
            Control cand = point;
            double v = std::max(0.0, cand.value(c, i) + sgn * step_size);
            if (v == cand.value(c, i)) continue;
            cand.value(c, i) = v;
            Evaluation e{};
            double val = feas_obj(cand, e);
            if (val < best_v - 1e-15) {
              point = std::move(cand);
              best_v = val;
              eval = e;
              improved = true;
              break;
            }
          }
          if (improved) break;
        }
        if (!improved) step_size *= 0.5;
      }
    }
    if (eval.violation > tol) continue;  // restart

    // Penalty continuation: shrink the entropy while the growing penalty
    // keeps the point feasible.
    double mu = opt.penalty_init;
    for (int round = 0; round < opt.penalty_rounds && search.budget_left(); ++round) {
      Evaluation e{};
      Control cand = pattern_search(search, point, mu, opt, &out.trace, e);
      if (e.violation <= tol) {
        point = std::move(cand);
        eval = e;
      }
      mu *= 10.0;
    }
    if (eval.violation <= tol &&
        (!have_best || eval.entropy < best_eval.entropy)) {
      best = point;
      best_eval = eval;
      have_best = true;
    }
  }

  if (have_best) {
    // Pull toward g == 1 along the segment; the entropy is nondecreasing away
    // from 1, so the smallest feasible t minimizes it on the segment.
    const Control endpoint = best;
    auto blend = [&](double t) {
      Control g = endpoint;
      for (int c = 0; c < g.cells(); ++c)
        for (int i = 0; i < g.atoms(); ++i)
          g.value(c, i) = 1.0 + t * (endpoint.value(c, i) - 1.0);
      return g;
    };
    double lo = 0.0, hi = 1.0;
    Evaluation e0 = search.evaluate(blend(0.0), 0.0, &out.trace, false);
    if (e0.violation <= tol) {
      best = blend(0.0);
      best_eval = e0;
    } else {
      for (int it = 0; it < 50 && search.budget_left(); ++it) {
        double mid = 0.5 * (lo + hi);
        Evaluation em = search.evaluate(blend(mid), 0.0, &out.trace, false);
        if (em.violation <= tol) {
          hi = mid;
          best = blend(mid);
          best_eval = em;
        } else {
          lo = mid;
        }
      }
    }
    out.value = best_eval.entropy;
    out.control = best;
    out.status = RateStatus::Converged;
  }
  out.evaluations = search.evals();
  return out;
}

std::vector<TailPoint> tail_probability(const SdeConfig& cfg,
                                        const TargetFunctional& target,
                                        const std::vector<double>& epsilons,
                                        int paths, std::uint64_t seed_root,
                                        int workers) {
  cfg.validate();
  target.validate();
  if (paths < 100) throw ParameterError("tail_probability: need at least 100 paths");
  std::vector<TailPoint> out;
  for (double eps : epsilons) {
    SdeConfig run = cfg;
    run.epsilon = eps;
    std::vector<std::uint8_t> hits(static_cast<std::size_t>(paths), 0);
    parallel_for(paths, workers, [&](int k) {
      TrajectorySample traj =
          simulate(run, path_seed(seed_root, static_cast<std::uint64_t>(k)));
      hits[static_cast<std::size_t>(k)] = target.hit(traj.states.back()) ? 1 : 0;
    });
    int h = 0;
    for (auto b : hits) h += b;
    double n = static_cast<double>(paths);
    double p = static_cast<double>(h) / n;
    const double z = 1.959963984540054;  // 95%
    double denom = 1.0 + z * z / n;
    double center = (p + z * z / (2.0 * n)) / denom;
    double hw = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
    TailPoint tp;
    tp.epsilon = eps;
    tp.paths = paths;
    tp.hits = h;
    tp.p_hat = p;
    tp.ci_low = std::max(0.0, center - hw);
    tp.ci_high = std::min(1.0, center + hw);
    tp.undersampled = (h == 0);
    tp.eps2_log_p = h == 0 ? -std::numeric_limits<double>::infinity()
                           : eps * eps * std::log(p);
    out.push_back(tp);
  }
  return out;
}

std::vector<Ldp1Point> ldp1_diagnostic(const SdeConfig& cfg, const Control& phi,
                                       const std::vector<double>& epsilons,
                                       int paths, double delta,
                                       std::uint64_t seed_root, int workers) {
  cfg.validate();
  phi.validate();
  if (paths < 1) throw ParameterError("ldp1_diagnostic: need at least one path");
  std::vector<Ldp1Point> out;
  for (double eps : epsilons) {
    SdeConfig run = cfg;
    run.epsilon = eps;
    std::vector<double> rho(static_cast<std::size_t>(paths), 0.0);
    parallel_for(paths, workers, [&](int k) {
      TrajectorySample path = simulate_controlled(
          run, phi, path_seed(seed_root, static_cast<std::uint64_t>(k)));
      TrajectorySample skel = solve_skeleton_on_grid(run, phi, path.times);
      rho[static_cast<std::size_t>(k)] =
          path_metric(path, skel, 0.0, run.horizon, run.domain);
    });
    double mean = 0.0;
    for (double r : rho) mean += r;
    mean /= static_cast<double>(paths);
    double var = 0.0;
    int exceed = 0;
    for (double r : rho) {
      var += (r - mean) * (r - mean);
      if (r > delta) ++exceed;
    }
    var = paths > 1 ? var / static_cast<double>(paths - 1) : 0.0;
    const double z99 = 2.5758293035489004;
    Ldp1Point pt;
    pt.epsilon = eps;
    pt.paths = paths;
    pt.mean_rho = mean;
    pt.ci = z99 * std::sqrt(var / static_cast<double>(paths));
    pt.exceed_frequency = static_cast<double>(exceed) / static_cast<double>(paths);
    out.push_back(pt);
  }
  return out;
}

}  // namespace logheat
