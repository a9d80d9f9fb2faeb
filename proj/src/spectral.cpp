#include "logheat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace logheat {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr int kCellOrder = 8;
constexpr double kGlNodes[kCellOrder] = {
    -0.9602898564975362316835609, -0.7966664774136267395915539,
    -0.5255324099163289858177390, -0.1834346424956498049394761,
    0.1834346424956498049394761,  0.5255324099163289858177390,
    0.7966664774136267395915539,  0.9602898564975362316835609};
constexpr double kGlWeights[kCellOrder] = {
    0.1012285362903762591525314, 0.2223810344533744705443560,
    0.3137066458778872873379622, 0.3626837833783619829651504,
    0.3626837833783619829651504, 0.3137066458778872873379622,
    0.2223810344533744705443560, 0.1012285362903762591525314};

}  // namespace

void Domain::validate() const {
  if (dimension != 1) throw ParameterError("domain: only dimension 1 is supported");
  if (!(length > 0.0) || !std::isfinite(length))
    throw ParameterError("domain: length must be positive and finite");
  if (quad_nodes < 16) throw ParameterError("domain: quad_nodes must be >= 16");
}

double eigenvalue(int k, const Domain& dom) {
  if (k < 1) throw ParameterError("eigenvalue: basis index must be >= 1");
  double w = static_cast<double>(k) * std::numbers::pi / dom.length;
  return w * w;
}

double basis_function(int k, double x, const Domain& dom) {
  if (k < 1) throw ParameterError("basis_function: basis index must be >= 1");
  double s = std::sqrt(2.0 / dom.length);
  return s * std::sin(static_cast<double>(k) * std::numbers::pi * x / dom.length);
}

bool SpectralField::finite() const {
  for (double c : coeffs)
    if (!std::isfinite(c)) return false;
  return true;
}

double SpectralField::l2_norm_sq() const {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return s;
}

double SpectralField::l2_norm() const { return std::sqrt(l2_norm_sq()); }

double SpectralField::sobolev_norm_sq(const Domain& dom) const {
  double s = 0.0;
  double base = std::numbers::pi / dom.length;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    double w = static_cast<double>(j + 1) * base;
    s += w * w * coeffs[j] * coeffs[j];
  }
  return s;
}

double evaluate(const SpectralField& u, double x, const Domain& dom) {
  if (x < 0.0 || x > dom.length) {
    std::ostringstream os;
    os << "evaluate: x = " << x << " outside [0, " << dom.length << "]";
    throw ParameterError(os.str());
  }
  double s = std::sqrt(2.0 / dom.length);
  double w = std::numbers::pi * x / dom.length;
  double acc = 0.0;
  for (std::size_t j = 0; j < u.coeffs.size(); ++j)
    acc += u.coeffs[j] * std::sin(static_cast<double>(j + 1) * w);
  return s * acc;
}

std::vector<double> evaluate(const SpectralField& u, const std::vector<double>& xs,
                             const Domain& dom) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = evaluate(u, xs[i], dom);
  return out;
}

SpectralField project(const SpectralField& u, int n) {
  if (n < 1) throw ParameterError("project: level must be >= 1");
  if (n >= u.level()) return u;
  return SpectralField(
      std::vector<double>(u.coeffs.begin(), u.coeffs.begin() + n));
}

QuadratureGrid::QuadratureGrid(const Domain& dom) : length_(dom.length) {
  dom.validate();
  int cells = (dom.quad_nodes + kCellOrder - 1) / kCellOrder;
  double h = dom.length / static_cast<double>(cells);
  nodes_.reserve(static_cast<std::size_t>(cells) * kCellOrder);
  weights_.reserve(static_cast<std::size_t>(cells) * kCellOrder);
  for (int c = 0; c < cells; ++c) {
    double mid = (static_cast<double>(c) + 0.5) * h;
    for (int q = 0; q < kCellOrder; ++q) {
      nodes_.push_back(mid + 0.5 * h * kGlNodes[q]);
      weights_.push_back(0.5 * h * kGlWeights[q]);
    }
  }
}

double QuadratureGrid::integrate(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (std::size_t q = 0; q < nodes_.size(); ++q) {
    double v = f(nodes_[q]);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "quadrature: integrand not finite at x = " << nodes_[q];
      throw NumericError(os.str());
    }
    acc += weights_[q] * v;
  }
  return acc;
}

double QuadratureGrid::integrate_values(const std::vector<double>& values) const {
  if (values.size() != nodes_.size())
    throw ParameterError("quadrature: tabulated values do not match the grid");
  double acc = 0.0;
  for (std::size_t q = 0; q < values.size(); ++q) {
    if (!std::isfinite(values[q])) {
      std::ostringstream os;
      os << "quadrature: integrand not finite at x = " << nodes_[q];
      throw NumericError(os.str());
    }
    acc += weights_[q] * values[q];
  }
  return acc;
}

BasisTable::BasisTable(const Domain& dom, int level)
    : dom_(dom), grid_(dom), level_(level) {
  if (level < 1) throw ParameterError("basis table: level must be >= 1");
  const auto& xs = grid_.nodes();
  basis_.resize(static_cast<std::size_t>(level) * xs.size());
  lambdas_.resize(static_cast<std::size_t>(level));
  for (int k = 1; k <= level; ++k) {
    double* row = basis_.data() + static_cast<std::size_t>(k - 1) * xs.size();
    for (std::size_t q = 0; q < xs.size(); ++q) row[q] = basis_function(k, xs[q], dom);
    lambdas_[static_cast<std::size_t>(k - 1)] = eigenvalue(k, dom);
  }
}

void BasisTable::eval_field(const SpectralField& u, std::vector<double>& values) const {
  const std::size_t nq = grid_.nodes().size();
  values.assign(nq, 0.0);
  int n = std::min(u.level(), level_);
  for (int k = 1; k <= n; ++k) {
    double c = u.coeffs[static_cast<std::size_t>(k - 1)];
    if (c == 0.0) continue;
    const double* row = basis_.data() + static_cast<std::size_t>(k - 1) * nq;
    for (std::size_t q = 0; q < nq; ++q) values[q] += c * row[q];
  }
}

SpectralField BasisTable::project_values(const std::vector<double>& values,
                                         int n) const {
  if (n < 1 || n > level_)
    throw ParameterError("basis table: projection level out of range");
  const std::size_t nq = grid_.nodes().size();
  if (values.size() != nq)
    throw ParameterError("basis table: tabulated values do not match the grid");
  for (std::size_t q = 0; q < nq; ++q) {
    if (!std::isfinite(values[q])) {
      std::ostringstream os;
      os << "projection: integrand not finite at x = " << grid_.nodes()[q];
      throw NumericError(os.str());
    }
  }
  const auto& w = grid_.weights();
  SpectralField out(n);
  for (int k = 1; k <= n; ++k) {
    const double* row = basis_.data() + static_cast<std::size_t>(k - 1) * nq;
    double acc = 0.0;
    for (std::size_t q = 0; q < nq; ++q) acc += w[q] * row[q] * values[q];
    out.coeffs[static_cast<std::size_t>(k - 1)] = acc;
  }
  return out;
}

SpectralField project_function(const std::function<double(double)>& f, int n,
                               const Domain& dom) {
  BasisTable table(dom, n);
  std::vector<double> values(table.grid().nodes().size());
  for (std::size_t q = 0; q < values.size(); ++q) {
    values[q] = f(table.grid().nodes()[q]);
    if (!std::isfinite(values[q]))
      throw NumericError("project_function: non-finite sample");
  }
  return table.project_values(values, n);
}

void TrajectorySample::append(double t, SpectralField state, bool jump) {
  if (!times.empty()) {
    if (!(t > times.back()))
      throw ParameterError("trajectory: times must be strictly increasing");
    if (state.level() != states.front().level())
      throw ParameterError("trajectory: states must share one level");
  }
  times.push_back(t);
  states.push_back(std::move(state));
  jump_flags.push_back(jump ? 1 : 0);
}

void TrajectorySample::validate() const {
  if (times.size() != states.size() || times.size() != jump_flags.size())
    throw ParameterError("trajectory: ragged storage");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ParameterError("trajectory: times must be strictly increasing");
  for (const auto& s : states)
    if (s.level() != states.front().level())
      throw ParameterError("trajectory: states must share one level");
}

namespace {

void check_shared_grid(const TrajectorySample& u, const TrajectorySample& v) {
  if (u.times.size() != v.times.size())
    throw AlignmentError("path_metric: trajectories have different grid sizes");
  for (std::size_t i = 0; i < u.times.size(); ++i)
    if (u.times[i] != v.times[i])
      throw AlignmentError("path_metric: trajectories do not share a time grid");
  if (!u.states.empty() && !v.states.empty() &&
      u.states.front().level() != v.states.front().level())
    throw AlignmentError("path_metric: trajectories have different levels");
}

}  // namespace

double path_metric_sq(const TrajectorySample& u, const TrajectorySample& v, double a,
                      double b, const Domain& dom) {
  check_shared_grid(u, v);
  if (!(a <= b)) throw ParameterError("path_metric: need a <= b");
  double sup_l2 = 0.0;
  double grad_int = 0.0;
  double base = std::numbers::pi / dom.length;
  bool seen = false;
  for (std::size_t i = 0; i < u.times.size(); ++i) {
    double t = u.times[i];
    if (t < a || t > b) continue;
    seen = true;
    const auto& cu = u.states[i].coeffs;
    const auto& cv = v.states[i].coeffs;
    double l2 = 0.0, w12 = 0.0;
    for (std::size_t j = 0; j < cu.size(); ++j) {
      double d = cu[j] - cv[j];
      double wj = static_cast<double>(j + 1) * base;
      l2 += d * d;
      w12 += wj * wj * d * d;
    }
    sup_l2 = std::max(sup_l2, l2);
    if (i + 1 < u.times.size() && u.times[i + 1] <= b)
      grad_int += (u.times[i + 1] - t) * w12;
  }
  if (!seen) throw AlignmentError("path_metric: no shared grid points in [a, b]");
  return sup_l2 + grad_int;
}

double path_metric(const TrajectorySample& u, const TrajectorySample& v, double a,
                   double b, const Domain& dom) {
  return std::sqrt(path_metric_sq(u, v, a, b, dom));
}

namespace {

// Left-constant (cadlag) resampling of `u` onto `grid`; grid must start at or
// after u.times.front().
TrajectorySample resample_left(const TrajectorySample& u,
                               const std::vector<double>& grid) {
  TrajectorySample out;
  std::size_t k = 0;
  for (double t : grid) {
    while (k + 1 < u.times.size() && u.times[k + 1] <= t) ++k;
    bool jump = (u.times[k] == t) && u.jump_flags[k];
    out.append(t, u.states[k], jump);
  }
  return out;
}

}  // namespace

std::pair<TrajectorySample, TrajectorySample> align_trajectories(
    const TrajectorySample& u, const TrajectorySample& v) {
  if (u.times.empty() || v.times.empty())
    throw AlignmentError("align: empty trajectory");
  if (u.times.front() != v.times.front())
    throw AlignmentError("align: trajectories start at different times");
  std::vector<double> grid;
  grid.reserve(u.times.size() + v.times.size());
  std::merge(u.times.begin(), u.times.end(), v.times.begin(), v.times.end(),
             std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  int lvl = std::max(u.states.front().level(), v.states.front().level());
  return {resample_left(embed_trajectory(u, lvl), grid),
          resample_left(embed_trajectory(v, lvl), grid)};
}

TrajectorySample embed_trajectory(const TrajectorySample& u, int level) {
  if (u.states.empty() || u.states.front().level() >= level) return u;
  TrajectorySample out = u;
  for (auto& s : out.states) s.coeffs.resize(static_cast<std::size_t>(level), 0.0);
  return out;
}

}  // namespace logheat
