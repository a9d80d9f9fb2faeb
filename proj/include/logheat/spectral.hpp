#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "logheat/errors.hpp"

namespace logheat {

// Interval domain (0, L) with homogeneous Dirichlet boundary. `quad_nodes` is
// the node budget for the composite Gauss-Legendre rule used by every spatial
// integral.
struct Domain {
  int dimension = 1;
  double length = 1.0;
  int quad_nodes = 512;

  void validate() const;
};

// |u| below this threshold contributes 0 to u*log|u| integrands (continuous
// extension of x log|x| at 0).
inline constexpr double kLogFloor = 1e-300;

inline double xlogx(double x) {
  double a = x < 0 ? -x : x;
  if (a < kLogFloor) return 0.0;
  return x * std::log(a);
}

// log_+(z) = log(1 v z)
inline double log_plus(double z) { return z > 1.0 ? std::log(z) : 0.0; }

// lambda_k = (k pi / L)^2 for the Dirichlet eigenbasis; k >= 1.
double eigenvalue(int k, const Domain& dom);

// e_k(x) = sqrt(2/L) sin(k pi x / L)
double basis_function(int k, double x, const Domain& dom);

// Coefficient vector in the Dirichlet eigenbasis: u = sum_j coeffs[j-1] e_j.
struct SpectralField {
  std::vector<double> coeffs;

  SpectralField() = default;
  explicit SpectralField(std::vector<double> c) : coeffs(std::move(c)) {}
  explicit SpectralField(int n) : coeffs(static_cast<std::size_t>(n), 0.0) {}

  int level() const { return static_cast<int>(coeffs.size()); }
  bool finite() const;
  double l2_norm_sq() const;
  double l2_norm() const;
  // ||u||^2_{W_0^{1,2}} = sum lambda_j coeffs_j^2
  double sobolev_norm_sq(const Domain& dom) const;
};

// Pointwise value sum_j c_j e_j(x); x must lie in [0, L].
double evaluate(const SpectralField& u, double x, const Domain& dom);
std::vector<double> evaluate(const SpectralField& u, const std::vector<double>& xs,
                             const Domain& dom);

// Truncation to the first n coefficients. Fields shorter than n are returned
// unchanged.
SpectralField project(const SpectralField& u, int n);

// Composite Gauss-Legendre rule on [0, L]. The requested node budget is
// rounded up to a whole number of 8-point cells.
class QuadratureGrid {
 public:
  explicit QuadratureGrid(const Domain& dom);

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double length() const { return length_; }

  // Throws NumericError (with the node location) on a non-finite integrand value.
  double integrate(const std::function<double(double)>& f) const;
  double integrate_values(const std::vector<double>& values) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double length_;
};

// Cached basis values e_k(x_q) over a quadrature grid; the workhorse behind
// every projection and nonlinear drift assembly.
class BasisTable {
 public:
  BasisTable(const Domain& dom, int level);

  const Domain& domain() const { return dom_; }
  const QuadratureGrid& grid() const { return grid_; }
  int level() const { return level_; }

  // values[q] = u(x_q)
  void eval_field(const SpectralField& u, std::vector<double>& values) const;
  // c_k = int e_k(x) f(x) dx from tabulated f on the grid
  SpectralField project_values(const std::vector<double>& values, int n) const;
  double eigenvalue_at(int k) const { return lambdas_[static_cast<std::size_t>(k - 1)]; }

 private:
  Domain dom_;
  QuadratureGrid grid_;
  int level_;
  std::vector<double> basis_;    // [k-1][q] flattened, k = 1..level
  std::vector<double> lambdas_;  // lambda_1..lambda_level
};

// Sample a function on the quadrature grid and project to level n.
SpectralField project_function(const std::function<double(double)>& f, int n,
                               const Domain& dom);

// Time-stamped sequence of fields; `jump_flags[k]` marks times at which a jump
// was applied. Times strictly increasing, first time 0 for full trajectories.
struct TrajectorySample {
  std::vector<double> times;
  std::vector<SpectralField> states;
  std::vector<std::uint8_t> jump_flags;

  std::size_t size() const { return times.size(); }
  void append(double t, SpectralField state, bool jump);
  void validate() const;
};

// rho_{a,b}(u, v): sup-in-time L2 gap plus left-endpoint-rule integral of the
// W_0^{1,2} gap over [a, b]. Requires a shared time grid.
double path_metric(const TrajectorySample& u, const TrajectorySample& v, double a,
                   double b, const Domain& dom);
double path_metric_sq(const TrajectorySample& u, const TrajectorySample& v, double a,
                      double b, const Domain& dom);

// Resample two trajectories onto the union of their grids with left-constant
// (cadlag) interpolation.
std::pair<TrajectorySample, TrajectorySample> align_trajectories(
    const TrajectorySample& u, const TrajectorySample& v);

// Zero-pad a trajectory's states to a higher Galerkin level (the represented
// function is unchanged).
TrajectorySample embed_trajectory(const TrajectorySample& u, int level);

}  // namespace logheat
