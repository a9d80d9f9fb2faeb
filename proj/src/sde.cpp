#include "logheat/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <thread>

#include "logheat/rng.hpp"

namespace logheat {

void SdeConfig::validate() const {
  domain.validate();
  if (level < 1) throw ConfigurationError("sde: level must be >= 1");
  if (!(horizon > 0.0)) throw ConfigurationError("sde: horizon must be positive");
  if (!(max_dt > 0.0 && max_dt <= horizon))
    throw ConfigurationError("sde: need 0 < max_dt <= horizon");
  if (!(epsilon > 0.0)) throw ConfigurationError("sde: epsilon must be positive");
  if (!initial.finite())
    throw ConfigurationError("sde: initial data must be finite");
  noise.validate();
  marks.validate();
}

double tp_horizon(double p, double theta) {
  if (!(p >= 2.0)) throw ParameterError("tp_horizon: need p >= 2");
  if (!(theta >= 0.0 && theta < 1.0))
    throw ParameterError("tp_horizon: theta must lie in [0,1)");
  return std::log(p / (p - 1.0 + theta));
}

SpectralField drift_F(const SpectralField& u, const BasisTable& table) {
  std::vector<double> vals;
  table.eval_field(u, vals);
  for (double& v : vals) v = xlogx(v);
  return table.project_values(vals, table.level());
}

SpectralField jump_H(const NoiseCoefficient& nc, const MarkSpace& ms, int atom,
                     const SpectralField& u, const BasisTable& table) {
  if (atom < 0 || atom >= ms.size())
    throw ParameterError("jump_H: atom index out of range");
  return eta_eval(nc, ms.atoms[static_cast<std::size_t>(atom)], u, table);
}

namespace {

// Running state for blow-up diagnostics.
struct NormHistory {
  std::deque<double> norms;
  void push(double t, double norm) {
    norms.push_back(t);
    norms.push_back(norm);
    while (norms.size() > 32) norms.pop_front();
  }
  std::vector<double> snapshot() const { return {norms.begin(), norms.end()}; }
};

constexpr double kBlowUpNorm = 1e12;

void check_state(const SpectralField& u, double t, NormHistory& hist) {
  double n = u.l2_norm();
  if (!std::isfinite(n) || n > kBlowUpNorm)
    throw BlowUpError(t, hist.snapshot(),
                      "state blew up at t = " + std::to_string(t));
  hist.push(t, n);
}

// Noise drift at the left endpoint of a substep.
void add_noise_drift(const SpectralField& u, double t, const SdeConfig& cfg,
                     const BasisTable& table, const NoiseDriftSpec& spec,
                     SpectralField& drift) {
  if (spec.kind == NoiseDriftSpec::Kind::None || cfg.noise.trivially_zero()) return;
  for (int i = 0; i < cfg.marks.size(); ++i) {
    const auto& atom = cfg.marks.atoms[static_cast<std::size_t>(i)];
    double factor;
    if (spec.kind == NoiseDriftSpec::Kind::Compensator) {
      factor = -atom.weight;
    } else {
      factor = atom.weight * (spec.control->at(t, i) - 1.0);
      if (factor == 0.0) continue;
    }
    SpectralField h = eta_eval(cfg.noise, atom, u, table);
    for (int j = 0; j < table.level(); ++j)
      drift.coeffs[static_cast<std::size_t>(j)] +=
          factor * h.coeffs[static_cast<std::size_t>(j)];
  }
}

// u <- exp(-lambda h) u + h * drift(u, t); exact on the linear part.
void drift_substep(SpectralField& u, double t, double h, const SdeConfig& cfg,
                   const BasisTable& table, const NoiseDriftSpec& spec) {
  if (h <= 0.0) return;
  SpectralField drift(table.level());
  if (cfg.log_drift_on) drift = drift_F(u, table);
  add_noise_drift(u, t, cfg, table, spec, drift);
  for (int j = 0; j < table.level(); ++j) {
    double decay = cfg.laplacian_on ? std::exp(-table.eigenvalue_at(j + 1) * h) : 1.0;
    auto k = static_cast<std::size_t>(j);
    u.coeffs[k] = decay * u.coeffs[k] + h * drift.coeffs[k];
  }
}

void apply_jump(SpectralField& u, const JumpEvent& ev, const SdeConfig& cfg,
                const BasisTable& table, double amplitude) {
  if (cfg.noise.trivially_zero() || amplitude == 0.0) return;
  SpectralField h = jump_H(cfg.noise, cfg.marks, ev.atom, u, table);
  double a = amplitude * static_cast<double>(ev.multiplicity);
  for (int j = 0; j < table.level(); ++j)
    u.coeffs[static_cast<std::size_t>(j)] +=
        a * h.coeffs[static_cast<std::size_t>(j)];
}

}  // namespace

SpectralField step(const SpectralField& u, double t, double dt,
                   std::span<const JumpEvent> jumps, const SdeConfig& cfg,
                   const BasisTable& table, const NoiseDriftSpec& drift_spec,
                   double jump_amplitude) {
  if (!(dt > 0.0 && dt <= cfg.max_dt + 1e-12))
    throw ParameterError("step: dt must lie in (0, max_dt]");
  SpectralField state = project(u, table.level());
  state.coeffs.resize(static_cast<std::size_t>(table.level()), 0.0);
  NormHistory hist;
  hist.push(t, state.l2_norm());
  double cursor = t;
  for (const auto& ev : jumps) {
    if (!(ev.time > t && ev.time <= t + dt))
      throw ParameterError("step: jump time outside the window");
    if (ev.multiplicity < 1)
      throw ParameterError("step: jump multiplicity must be >= 1");
    drift_substep(state, cursor, ev.time - cursor, cfg, table, drift_spec);
    apply_jump(state, ev, cfg, table, jump_amplitude);
    check_state(state, ev.time, hist);
    cursor = ev.time;
  }
  drift_substep(state, cursor, t + dt - cursor, cfg, table, drift_spec);
  check_state(state, t + dt, hist);
  return state;
}

SpectralField step(const SpectralField& u, double t, double dt,
                   std::span<const JumpEvent> jumps, const SdeConfig& cfg,
                   const BasisTable& table) {
  return step(u, t, dt, jumps, cfg, table,
              NoiseDriftSpec{NoiseDriftSpec::Kind::Compensator, nullptr},
              cfg.epsilon);
}

namespace {

// Uniform grid joined with the event times; strictly increasing, ends at T.
std::vector<double> jump_adapted_grid(double horizon, double max_dt,
                                      const std::vector<JumpEvent>& events) {
  int n = static_cast<int>(std::ceil(horizon / max_dt - 1e-12));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + events.size() + 1);
  for (int k = 0; k <= n; ++k)
    grid.push_back(horizon * static_cast<double>(k) / static_cast<double>(n));
  for (const auto& ev : events) grid.push_back(ev.time);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

TrajectorySample run_path(const SdeConfig& cfg, const std::vector<JumpEvent>& events,
                          const BasisTable& table) {
  std::vector<double> grid = jump_adapted_grid(cfg.horizon, cfg.max_dt, events);
  SpectralField state = project(cfg.initial, cfg.level);
  state.coeffs.resize(static_cast<std::size_t>(cfg.level), 0.0);

  TrajectorySample traj;
  traj.append(grid[0], state, false);
  NormHistory hist;
  hist.push(0.0, state.l2_norm());

  NoiseDriftSpec spec{NoiseDriftSpec::Kind::Compensator, nullptr};
  std::size_t ev = 0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    double t0 = grid[k - 1], t1 = grid[k];
    drift_substep(state, t0, t1 - t0, cfg, table, spec);
    bool jumped = false;
    while (ev < events.size() && events[ev].time == t1) {
      apply_jump(state, events[ev], cfg, table, cfg.epsilon);
      jumped = true;
      ++ev;
    }
    check_state(state, t1, hist);
    traj.append(t1, state, jumped);
  }
  return traj;
}

std::vector<JumpEvent> sample_events(const SdeConfig& cfg, const Control& phi,
                                     std::uint64_t seed) {
  double base_scale = 1.0 / cfg.epsilon;
  double expected = base_scale * phi.sup() * cfg.marks.total_intensity() * cfg.horizon;
  if (expected > kMaxExpectedEvents)
    throw ConfigurationError("simulate: expected event count exceeds the cap");
  return sample_controlled_prm(cfg.marks, cfg.horizon, base_scale, phi, seed);
}

}  // namespace

TrajectorySample simulate(const SdeConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  BasisTable table(cfg.domain, cfg.level);
  std::vector<JumpEvent> events;
  if (!cfg.noise.trivially_zero())
    events = sample_events(cfg, Control::constant(1.0, 1, cfg.marks.size(), cfg.horizon),
                           seed);
  return run_path(cfg, events, table);
}

TrajectorySample simulate_controlled(const SdeConfig& cfg, const Control& phi,
                                     std::uint64_t seed) {
  cfg.validate();
  phi.validate();
  if (phi.atoms() != cfg.marks.size())
    throw ConfigurationError("simulate_controlled: control does not match mark space");
  BasisTable table(cfg.domain, cfg.level);
  std::vector<JumpEvent> events;
  if (!cfg.noise.trivially_zero()) events = sample_events(cfg, phi, seed);
  return run_path(cfg, events, table);
}

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          int i = next.fetch_add(1);
          if (i >= count) break;
          body(i);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

MomentEstimate moment_estimate(const SdeConfig& cfg, double p, int paths,
                               std::uint64_t seed_root, int workers) {
  cfg.validate();
  if (!(p >= 2.0)) throw ParameterError("moment_estimate: need p >= 2");
  if (paths < 1) throw ParameterError("moment_estimate: need at least one path");

  std::vector<double> sup_p(static_cast<std::size_t>(paths), 0.0);
  std::vector<double> energy(static_cast<std::size_t>(paths), 0.0);
  std::vector<std::uint8_t> blew(static_cast<std::size_t>(paths), 0);

  parallel_for(paths, workers, [&](int k) {
    try {
      TrajectorySample traj = simulate(cfg, path_seed(seed_root, static_cast<std::uint64_t>(k)));
      double sp = 0.0, en = 0.0;
      for (std::size_t i = 0; i < traj.size(); ++i) {
        double l2 = traj.states[i].l2_norm();
        sp = std::max(sp, std::pow(l2, p));
        if (i + 1 < traj.size())
          en += (traj.times[i + 1] - traj.times[i]) * std::pow(l2, p - 2.0) *
                traj.states[i].sobolev_norm_sq(cfg.domain);
      }
      sup_p[static_cast<std::size_t>(k)] = sp;
      energy[static_cast<std::size_t>(k)] = en;
    } catch (const BlowUpError&) {
      blew[static_cast<std::size_t>(k)] = 1;
    }
  });

  MomentEstimate out;
  out.p = p;
  out.paths = paths;
  for (auto b : blew) out.blowups += b;
  int ok = paths - out.blowups;
  if (ok > 0) {
    double ms = 0.0, me = 0.0;
    for (int k = 0; k < paths; ++k) {
      if (blew[static_cast<std::size_t>(k)]) continue;
      ms += sup_p[static_cast<std::size_t>(k)];
      me += energy[static_cast<std::size_t>(k)];
    }
    ms /= ok;
    me /= ok;
    double vs = 0.0, ve = 0.0;
    for (int k = 0; k < paths; ++k) {
      if (blew[static_cast<std::size_t>(k)]) continue;
      vs += (sup_p[static_cast<std::size_t>(k)] - ms) * (sup_p[static_cast<std::size_t>(k)] - ms);
      ve += (energy[static_cast<std::size_t>(k)] - me) * (energy[static_cast<std::size_t>(k)] - me);
    }
    double denom = ok > 1 ? static_cast<double>(ok - 1) : 1.0;
    const double z99 = 2.5758293035489004;
    out.sup_moment_mean = ms;
    out.energy_mean = me;
    out.sup_moment_ci = z99 * std::sqrt(vs / denom / ok);
    out.energy_ci = z99 * std::sqrt(ve / denom / ok);
  }
  return out;
}

}  // namespace logheat
