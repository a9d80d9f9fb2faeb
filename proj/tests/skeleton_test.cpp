#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "logheat/skeleton.hpp"
#include "test_oracles.hpp"

using namespace logheat;

namespace {

const double kPi = std::numbers::pi;

SdeConfig skeleton_config() {
  SdeConfig cfg;
  cfg.domain.quad_nodes = 256;
  cfg.level = 8;
  cfg.horizon = 0.4;
  cfg.max_dt = 1.0 / 128.0;
  cfg.initial = SpectralField(std::vector<double>{0.8, 0.3});
  cfg.noise.family = NoiseFamily::Tanh;
  cfg.noise.m1 = 0.5;
  cfg.noise.m2 = 0.5;
  cfg.marks.atoms = {{1.0, 0.5, 0.5}, {0.5, 0.25, 0.25}};
  return cfg;
}

MarkSpace unit_mass() {
  MarkSpace ms;
  ms.atoms = {{1.0, 0.5, 0.5}};
  return ms;
}

}  // namespace

TEST_CASE("entropy functional: closed forms") {
  MarkSpace ms = unit_mass();
  CHECK(entropy_LT(Control::constant(1.0, 4, 1, 1.0), ms) == 0.0);
  CHECK(entropy_LT(Control::constant(2.0, 1, 1, 1.0), ms) ==
        doctest::Approx(2.0 * std::log(2.0) - 1.0).epsilon(1e-14));
  CHECK(entropy_LT(Control::constant(0.0, 1, 1, 1.0), ms) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(Control(1, 1, 1.0, std::vector<double>{-0.5}), ConfigurationError);
}

TEST_CASE("entropy functional: nonnegative, zero only at unit control, convex") {
  MarkSpace ms;
  ms.atoms = {{1.5, 0.5, 0.5}, {0.75, 0.25, 0.25}};
  std::mt19937_64 gen(61);
  std::uniform_real_distribution<double> dist(0.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    Control a(3, 2, 1.0, {dist(gen), dist(gen), dist(gen), dist(gen), dist(gen), dist(gen)});
    Control b(3, 2, 1.0, {dist(gen), dist(gen), dist(gen), dist(gen), dist(gen), dist(gen)});
    double la = entropy_LT(a, ms), lb = entropy_LT(b, ms);
    CHECK(la >= 0.0);
    Control mid(3, 2, 1.0, 1.0);
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < 2; ++i)
        mid.value(c, i) = 0.5 * (a.value(c, i) + b.value(c, i));
    CHECK(entropy_LT(mid, ms) <= 0.5 * (la + lb) + 1e-12);
  }
  // strictly positive away from 1
  Control g = Control::constant(1.0, 2, 2, 1.0);
  g.value(1, 0) = 1.2;
  CHECK(entropy_LT(g, ms) > 0.0);
}

TEST_CASE("unit control reduces to the uncontrolled equation") {
  SdeConfig cfg = skeleton_config();
  Control one = Control::constant(1.0, 1, cfg.marks.size(), cfg.horizon);
  TrajectorySample skel = solve_skeleton(cfg, one);

  SdeConfig noiseless = cfg;
  noiseless.noise.m1 = 0.0;
  noiseless.noise.m2 = 0.0;
  TrajectorySample sde = simulate(noiseless, 1);

  REQUIRE(skel.size() == sde.size());
  for (size_t i = 0; i < skel.size(); ++i) {
    CHECK(skel.times[i] == sde.times[i]);
    for (int j = 0; j < cfg.level; ++j)
      CHECK(std::fabs(skel.states[i].coeffs[size_t(j)] -
                      sde.states[i].coeffs[size_t(j)]) < 1e-12);
  }
}

TEST_CASE("noise and log off reduces to analytic heat decay") {
  SdeConfig cfg = skeleton_config();
  cfg.log_drift_on = false;
  cfg.noise.m1 = 0.0;
  cfg.noise.m2 = 0.0;
  cfg.initial = SpectralField(std::vector<double>{1.0});
  Control one = Control::constant(1.0, 2, cfg.marks.size(), cfg.horizon);
  TrajectorySample traj = solve_skeleton(cfg, one);
  for (size_t i = 0; i < traj.size(); ++i)
    CHECK(std::fabs(traj.states[i].coeffs[0] - std::exp(-kPi * kPi * traj.times[i])) <
          1e-12);
}

TEST_CASE("skeleton self-convergence in level and step") {
  SdeConfig coarse = skeleton_config();
  Control g(4, 2, coarse.horizon,
            std::vector<double>{2.0, 0.5, 1.5, 1.0, 0.5, 2.0, 1.0, 1.5});

  auto solve_at = [&](int level, double dt) {
    SdeConfig cfg = skeleton_config();
    cfg.level = level;
    cfg.max_dt = dt;
    return solve_skeleton(cfg, g);
  };
  // joint (level, step) refinement: first-order contraction per halving
  std::vector<double> gaps;
  for (int k = 0; k < 3; ++k) {
    TrajectorySample a = solve_at(4 << k, 1.0 / double(64 << k));
    TrajectorySample b = solve_at(8 << k, 1.0 / double(128 << k));
    auto [bu, au] = align_trajectories(b, a);
    gaps.push_back(path_metric(bu, au, 0.0, coarse.horizon, coarse.domain));
  }
  CHECK(gaps[1] <= 0.65 * gaps[0]);
  CHECK(gaps[2] <= 0.65 * gaps[1]);
  CHECK(gaps[2] < 0.05);  // tolerance band at the (16, 1/256) vs (32, 1/512) pair
}

TEST_CASE("uniform bound check over sampled S_N controls") {
  SdeConfig cfg = skeleton_config();
  SUBCASE("empty set gives an empty report") {
    UniformBoundReport r = uniform_bound_check({}, cfg, 2.0);
    CHECK(r.entries.empty());
    CHECK(r.max_energy == 0.0);
  }
  SUBCASE("unit control reproduces the uncontrolled energy") {
    Control one = Control::constant(1.0, 1, cfg.marks.size(), cfg.horizon);
    UniformBoundReport r = uniform_bound_check({one}, cfg, 2.0);
    REQUIRE(r.entries.size() == 1);
    TrajectorySample traj = solve_skeleton(cfg, one);
    double sup = 0.0, grad = 0.0;
    for (size_t i = 0; i < traj.size(); ++i) {
      sup = std::max(sup, traj.states[i].l2_norm_sq());
      if (i + 1 < traj.size())
        grad += (traj.times[i + 1] - traj.times[i]) *
                traj.states[i].sobolev_norm_sq(cfg.domain);
    }
    CHECK(r.entries[0].energy() == doctest::Approx(sup + grad).epsilon(1e-13));
    CHECK(r.entries[0].entropy == 0.0);
  }
  SUBCASE("random controls with L_T <= 2 stay uniformly bounded") {
    std::mt19937_64 gen(62);
    std::uniform_real_distribution<double> dist(0.1, 3.0);
    std::vector<Control> controls;
    const double cap = 2.0;
    while (controls.size() < 50) {
      Control g(4, cfg.marks.size(), cfg.horizon, 1.0);
      for (int c = 0; c < 4; ++c)
        for (int i = 0; i < cfg.marks.size(); ++i) g.value(c, i) = dist(gen);
      // shrink toward the unit control until the entropy cap holds
      double t = 1.0;
      while (entropy_LT(g, cfg.marks) > cap && t > 1e-6) {
        t *= 0.8;
        for (int c = 0; c < 4; ++c)
          for (int i = 0; i < cfg.marks.size(); ++i)
            g.value(c, i) = 1.0 + t * (g.value(c, i) - 1.0);
      }
      controls.push_back(g);
    }
    UniformBoundReport r = uniform_bound_check(controls, cfg, cap);
    CHECK(r.entries.size() == 50);
    CHECK(r.all_finite);
    CHECK(r.max_energy < 100.0);  // recorded regression bound
    CHECK(std::isfinite(r.max_energy));
  }
  SUBCASE("controls outside S_N are rejected") {
    Control big = Control::constant(8.0, 4, cfg.marks.size(), cfg.horizon);
    CHECK_THROWS_AS(uniform_bound_check({big}, cfg, 0.5), ConfigurationError);
  }
}

TEST_CASE("continuity probe under vanishing perturbations") {
  SdeConfig cfg = skeleton_config();
  Control g = Control::constant(1.0, 2, cfg.marks.size(), cfg.horizon);
  g.value(0, 0) = 1.5;
  g.value(1, 1) = 0.75;

  SUBCASE("identical sequence gives zero gaps") {
    std::vector<Control> seq(4, g);
    for (double gap : continuity_probe(cfg, g, seq)) CHECK(gap == 0.0);
  }

  SUBCASE("dyadic perturbations give strictly decreasing gaps") {
    std::vector<Control> seq;
    std::vector<double> deltas;
    for (int n : {1, 2, 4, 8}) {
      Control gn = g;
      for (int c = 0; c < gn.cells(); ++c)
        gn.value(c, 0) = g.value(c, 0) + 1.0 / double(n);
      seq.push_back(gn);
      deltas.push_back(1.0 / double(n));
    }
    std::vector<double> gaps = continuity_probe(cfg, g, seq);
    REQUIRE(gaps.size() == 4);
    for (size_t i = 0; i + 1 < gaps.size(); ++i) CHECK(gaps[i + 1] < gaps[i]);

    // first-order sensitivity: gap ~ C * (sum_i w_i h1_i) * |delta| * T
    double factor = 0.0;
    for (const auto& atom : cfg.marks.atoms) factor += atom.weight * atom.h1;
    std::vector<double> ratios;
    for (size_t i = 0; i < gaps.size(); ++i)
      ratios.push_back(gaps[i] / (factor * deltas[i] * cfg.horizon));
    double lo = *std::min_element(ratios.begin(), ratios.end());
    double hi = *std::max_element(ratios.begin(), ratios.end());
    CHECK(hi / lo < 1.5);  // near-linear response
    CHECK(hi < 10.0);      // fitted constant stays modest
  }
}

TEST_CASE("control CSV round-trip and bounded-class checks") {
  std::mt19937_64 gen(63);
  std::uniform_real_distribution<double> dist(0.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    int cells = 1 + int(gen() % 5);
    int atoms = 1 + int(gen() % 3);
    Control g(cells, atoms, 0.7, 1.0);
    for (int c = 0; c < cells; ++c)
      for (int i = 0; i < atoms; ++i) g.value(c, i) = dist(gen);
    Control back = Control::from_csv(g.to_csv(), g.horizon());
    REQUIRE(back.cells() == cells);
    REQUIRE(back.atoms() == atoms);
    for (int c = 0; c < cells; ++c)
      for (int i = 0; i < atoms; ++i) CHECK(back.value(c, i) == g.value(c, i));
  }

  Control g(2, 1, 1.0, std::vector<double>{0.5, 2.0});
  CHECK(g.in_bounded_class(2.0));
  CHECK(!g.in_bounded_class(1.5));
  CHECK(g.at(0.49, 0) == 0.5);
  CHECK(g.at(0.51, 0) == 2.0);
  CHECK(g.at(1.0, 0) == 2.0);  // horizon falls into the last cell
  CHECK(g.sup_atom(0) == 2.0);
}

TEST_CASE("skeleton rejects a step coarser than the control cells") {
  SdeConfig cfg = skeleton_config();
  cfg.max_dt = 0.3;
  Control g = Control::constant(1.0, 4, cfg.marks.size(), cfg.horizon);
  CHECK_THROWS_AS(solve_skeleton(cfg, g), ParameterError);
}
