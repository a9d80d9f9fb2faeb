#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "logheat/spectral.hpp"
#include "test_oracles.hpp"

using namespace logheat;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("eigenvalues of the Dirichlet Laplacian") {
  Domain unit;
  CHECK(eigenvalue(1, unit) == doctest::Approx(kPi * kPi).epsilon(1e-14));
  CHECK(eigenvalue(3, unit) == doctest::Approx(9.0 * kPi * kPi).epsilon(1e-14));
  Domain wide;
  wide.length = 2.0;
  CHECK(eigenvalue(2, wide) == doctest::Approx(kPi * kPi).epsilon(1e-14));
  CHECK_THROWS_AS(eigenvalue(0, unit), ParameterError);
  CHECK_THROWS_AS(eigenvalue(-3, unit), ParameterError);

  for (int k = 1; k < 40; ++k) CHECK(eigenvalue(k + 1, unit) > eigenvalue(k, unit));
}

TEST_CASE("pointwise evaluation") {
  Domain dom;
  SpectralField zero(4);
  CHECK(evaluate(zero, 0.3, dom) == 0.0);

  SpectralField e1(std::vector<double>{1.0});
  CHECK(evaluate(e1, 0.5, dom) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  SpectralField e2(std::vector<double>{0.0, 1.0});
  CHECK(evaluate(e2, 0.25, dom) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  CHECK_THROWS_AS(evaluate(e1, -0.1, dom), ParameterError);
  CHECK_THROWS_AS(evaluate(e1, 1.1, dom), ParameterError);
}

TEST_CASE("projection truncates and is a contraction") {
  SpectralField u(std::vector<double>{1.0, 0.5, 0.25});
  SpectralField p = project(u, 2);
  REQUIRE(p.level() == 2);
  CHECK(p.coeffs[0] == 1.0);
  CHECK(p.coeffs[1] == 0.5);
  CHECK(project(u, 3).coeffs == u.coeffs);
  CHECK(project(u, 7).coeffs == u.coeffs);

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    SpectralField v(12);
    for (auto& c : v.coeffs) c = dist(gen);
    int n = 1 + int(gen() % 12);
    SpectralField pv = project(v, n);
    CHECK(project(pv, n).coeffs == pv.coeffs);  // idempotent
    CHECK(pv.l2_norm() <= v.l2_norm() + 1e-15);
  }
}

TEST_CASE("projection from grid samples recovers basis coefficients") {
  Domain dom;
  auto f = [](double x) { return std::sqrt(2.0) * std::sin(kPi * x); };
  SpectralField p = project_function(f, 4, dom);
  REQUIRE(p.level() == 4);
  CHECK(p.coeffs[0] == doctest::Approx(1.0).epsilon(1e-10));
  for (int j = 1; j < 4; ++j) CHECK(std::fabs(p.coeffs[size_t(j)]) < 1e-10);
}

TEST_CASE("quadrature on smooth and logarithmic integrands") {
  Domain dom;
  QuadratureGrid grid(dom);
  CHECK(grid.integrate([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(grid.integrate([](double x) { return std::sin(kPi * x) * std::sin(kPi * x); }) ==
        doctest::Approx(0.5).epsilon(1e-14));

  // u = sqrt(2) sin(pi x): int 2 sin^2(pi x) log(sqrt(2)|sin(pi x)|) dx
  auto integrand = [](double x) {
    double u = std::sqrt(2.0) * std::sin(kPi * x);
    return u * u * std::log(std::fabs(u) + 1e-300);
  };
  double oracle = oracles::integrate(integrand, 0.0, 1.0);
  CHECK(oracle == doctest::Approx(0.15342640972002734).epsilon(1e-9));
  CHECK(grid.integrate(integrand) == doctest::Approx(oracle).epsilon(1e-7));

  // Richardson-style check: a 10x refined rule agrees.
  Domain fine = dom;
  fine.quad_nodes = 5120;
  QuadratureGrid fine_grid(fine);
  CHECK(fine_grid.integrate(integrand) == doctest::Approx(oracle).epsilon(1e-10));

  CHECK_THROWS_AS(grid.integrate([](double x) { return x < 0.5 ? 1.0 : std::nan(""); }),
                  NumericError);
}

TEST_CASE("Parseval identity between coefficients and quadrature") {
  Domain dom;
  dom.quad_nodes = 256;
  BasisTable table(dom, 32);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int trial = 0; trial < 25; ++trial) {
    SpectralField u(32);
    for (auto& c : u.coeffs) c = dist(gen);
    std::vector<double> vals;
    table.eval_field(u, vals);
    for (auto& v : vals) v *= v;
    double quad = table.grid().integrate_values(vals);
    CHECK(quad == doctest::Approx(u.l2_norm_sq()).epsilon(1e-6));
  }
}

namespace {

TrajectorySample random_trajectory(std::mt19937_64& gen, int steps, int level) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  TrajectorySample traj;
  double t = 0.0;
  for (int i = 0; i <= steps; ++i) {
    SpectralField u(level);
    for (auto& c : u.coeffs) c = dist(gen);
    traj.append(t, u, false);
    t += 0.05;
  }
  return traj;
}

// Straight recomputation of rho^2 from raw states.
double brute_force_rho_sq(const TrajectorySample& u, const TrajectorySample& v,
                          double a, double b, const Domain& dom) {
  double sup = 0.0, integral = 0.0;
  for (size_t i = 0; i < u.times.size(); ++i) {
    if (u.times[i] < a || u.times[i] > b) continue;
    double l2 = 0.0, w = 0.0;
    for (size_t j = 0; j < u.states[i].coeffs.size(); ++j) {
      double d = u.states[i].coeffs[j] - v.states[i].coeffs[j];
      l2 += d * d;
      w += eigenvalue(int(j) + 1, dom) * d * d;
    }
    if (l2 > sup) sup = l2;
    if (i + 1 < u.times.size() && u.times[i + 1] <= b)
      integral += (u.times[i + 1] - u.times[i]) * w;
  }
  return sup + integral;
}

}  // namespace

TEST_CASE("path metric: identity, closed form, brute-force recomputation") {
  Domain dom;
  std::mt19937_64 gen(3);
  TrajectorySample u = random_trajectory(gen, 20, 6);
  CHECK(path_metric(u, u, 0.0, 1.0, dom) == 0.0);

  // v = 0, u constant in time with coeffs = (c): rho^2 = c^2 + (b-a) lambda_1 c^2
  double c = 1.7;
  TrajectorySample cu, zu;
  for (int i = 0; i <= 10; ++i) {
    cu.append(0.1 * i, SpectralField(std::vector<double>{c}), false);
    zu.append(0.1 * i, SpectralField(std::vector<double>{0.0}), false);
  }
  double expected = c * c + 1.0 * eigenvalue(1, dom) * c * c;
  CHECK(path_metric_sq(cu, zu, 0.0, 1.0, dom) == doctest::Approx(expected).epsilon(1e-12));

  for (int trial = 0; trial < 20; ++trial) {
    TrajectorySample a = random_trajectory(gen, 15, 5);
    TrajectorySample b = random_trajectory(gen, 15, 5);
    double lo = 0.1, hi = 0.7;
    CHECK(path_metric_sq(a, b, lo, hi, dom) ==
          doctest::Approx(brute_force_rho_sq(a, b, lo, hi, dom)).epsilon(1e-12));
  }
}

TEST_CASE("path metric axioms on shared grids") {
  Domain dom;
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    TrajectorySample a = random_trajectory(gen, 12, 4);
    TrajectorySample b = random_trajectory(gen, 12, 4);
    TrajectorySample c = random_trajectory(gen, 12, 4);
    double ab = path_metric(a, b, 0.0, 0.6, dom);
    double ba = path_metric(b, a, 0.0, 0.6, dom);
    double ac = path_metric(a, c, 0.0, 0.6, dom);
    double cb = path_metric(c, b, 0.0, 0.6, dom);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-13));
    CHECK(ab >= 0.0);
    CHECK(ab <= ac + cb + 1e-12);
  }
}

TEST_CASE("mismatched grids are rejected") {
  Domain dom;
  TrajectorySample a, b;
  a.append(0.0, SpectralField(2), false);
  a.append(0.5, SpectralField(2), false);
  b.append(0.0, SpectralField(2), false);
  b.append(0.4, SpectralField(2), false);
  CHECK_THROWS_AS(path_metric(a, b, 0.0, 0.5, dom), AlignmentError);
}

TEST_CASE("alignment resamples onto the union grid left-continuously") {
  TrajectorySample a, b;
  a.append(0.0, SpectralField(std::vector<double>{1.0}), false);
  a.append(0.4, SpectralField(std::vector<double>{2.0}), true);
  a.append(1.0, SpectralField(std::vector<double>{3.0}), false);
  b.append(0.0, SpectralField(std::vector<double>{5.0}), false);
  b.append(0.7, SpectralField(std::vector<double>{6.0}), false);
  b.append(1.0, SpectralField(std::vector<double>{7.0}), false);
  auto [au, bu] = align_trajectories(a, b);
  REQUIRE(au.times == std::vector<double>({0.0, 0.4, 0.7, 1.0}));
  REQUIRE(bu.times == au.times);
  CHECK(au.states[2].coeffs[0] == 2.0);  // a held left-constant through 0.7
  CHECK(bu.states[1].coeffs[0] == 5.0);  // b held left-constant through 0.4
  CHECK(au.jump_flags[1] == 1);
}

TEST_CASE("trajectory invariants") {
  TrajectorySample t;
  t.append(0.0, SpectralField(2), false);
  CHECK_THROWS_AS(t.append(0.0, SpectralField(2), false), ParameterError);
  CHECK_THROWS_AS(t.append(1.0, SpectralField(3), false), ParameterError);
}
