#include "logheat/analysis.hpp"

#include <cmath>
#include <numbers>

namespace logheat {

namespace {

// ||u||^2 log||u|| with the continuous extension at 0.
double sq_log_norm(double norm_sq) {
  if (norm_sq < kLogFloor) return 0.0;
  return 0.5 * norm_sq * std::log(norm_sq);
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    acc += 0.5 * (t[i] - t[i - 1]) * (v[i] + v[i - 1]);
  return acc;
}

// Running trapezoid integral from t[0]; out[i] = int_{t0}^{t_i}.
std::vector<double> cum_trapezoid(const std::vector<double>& t,
                                  const std::vector<double>& v) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (v[i] + v[i - 1]);
  return out;
}

void check_tabulation(const std::vector<double>& times, std::size_t n_funcs,
                      const std::vector<const std::vector<double>*>& funcs) {
  if (times.size() < 2)
    throw ParameterError("tabulation: need at least two grid points");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ParameterError("tabulation: times must be strictly increasing");
  for (std::size_t k = 0; k < n_funcs; ++k) {
    if (funcs[k]->size() != times.size())
      throw ParameterError("tabulation: function samples do not match the grid");
    for (double v : *funcs[k])
      if (!(v >= 0.0) || !std::isfinite(v))
        throw ParameterError("tabulation: functions must be nonnegative and finite");
  }
}

}  // namespace

double log_sobolev_gap(const SpectralField& u, double eps, const BasisTable& table) {
  if (!(eps > 0.0)) throw ParameterError("log_sobolev_gap: eps must be positive");
  std::vector<double> vals;
  table.eval_field(u, vals);
  for (double& v : vals) v = xlogx(v) * v;  // |u|^2 log|u|
  double lhs = table.grid().integrate_values(vals);
  double l2 = u.l2_norm_sq();
  double d = static_cast<double>(table.domain().dimension);
  double rhs = eps * u.sobolev_norm_sq(table.domain()) +
               0.25 * d * std::log(1.0 / eps) * l2 + sq_log_norm(l2);
  return rhs - lhs;
}

double log_sobolev_gap(const SpectralField& u, double eps, const Domain& dom) {
  return log_sobolev_gap(u, eps, BasisTable(dom, std::max(1, u.level())));
}

double log_sobolev_plus_gap(const SpectralField& u, double eps,
                            const BasisTable& table) {
  if (!(eps > 0.0)) throw ParameterError("log_sobolev_plus_gap: eps must be positive");
  std::vector<double> vals;
  table.eval_field(u, vals);
  for (double& v : vals) v = v * v * log_plus(std::fabs(v));
  double lhs = table.grid().integrate_values(vals);
  double l2 = u.l2_norm_sq();
  const Domain& dom = table.domain();
  double d = static_cast<double>(dom.dimension);
  double rhs = eps * u.sobolev_norm_sq(dom) + 0.25 * d * std::log(1.0 / eps) * l2 +
               sq_log_norm(l2) + dom.length / (2.0 * std::numbers::e);
  return rhs - lhs;
}

double log_sobolev_plus_gap(const SpectralField& u, double eps, const Domain& dom) {
  return log_sobolev_plus_gap(u, eps, BasisTable(dom, std::max(1, u.level())));
}

void GronwallInputs::validate() const {
  if (!(C >= 0.0) || !std::isfinite(C))
    throw ParameterError("gronwall: C must be nonnegative and finite");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw ParameterError("gronwall: alpha must lie in [0, 1)");
  check_tabulation(times, 2, {&f, &g});
}

double nonlinear_gronwall_bound(const GronwallInputs& in) {
  in.validate();
  double om = 1.0 - in.alpha;
  std::vector<double> F = cum_trapezoid(in.times, in.f);
  double Ft = F.back();
  std::vector<double> integrand(in.times.size());
  for (std::size_t i = 0; i < in.times.size(); ++i)
    integrand[i] = in.g[i] * std::exp(om * (Ft - F[i]));
  double inner = std::pow(in.C, om) * std::exp(om * Ft) +
                 om * trapezoid(in.times, integrand);
  return std::pow(inner, 1.0 / om);
}

void LogGronwallInputs::validate() const {
  check_tabulation(times, 4, {&h, &f, &g, &a});
  if (!(times.front() == 0.0))
    throw ParameterError("log_gronwall: grid must start at 0");
  if (!(h.front() >= 1.0)) throw ParameterError("log_gronwall: need h(0) >= 1");
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] < h[i - 1])
      throw ParameterError("log_gronwall: h must be nondecreasing");
}

double log_gronwall_bound(const LogGronwallInputs& in) {
  in.validate();
  std::vector<double> G = cum_trapezoid(in.times, in.g);
  std::vector<double> integrand(in.times.size());
  for (std::size_t i = 0; i < in.times.size(); ++i)
    integrand[i] = in.f[i] * std::exp(-G[i]);
  double eg = std::exp(G.back());
  return std::pow(in.h.back(), eg) * std::exp(eg * trapezoid(in.times, integrand));
}

namespace {

double one_sided_terms(const SpectralField& xi, const SpectralField& zeta,
                       double alpha) {
  double c = 1.0 / (2.0 * (1.0 - alpha) * std::numbers::e);
  return c * (std::pow(xi.l2_norm_sq(), 1.0 - alpha) +
              std::pow(zeta.l2_norm_sq(), 1.0 - alpha));
}

void check_pair_params(double eps, double alpha) {
  if (!(eps > 0.0)) throw ParameterError("difference bound: eps must be positive");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ParameterError("difference bound: alpha must lie in (0, 1)");
}

}  // namespace

BoundPair log_diff_pairing_bound(const SpectralField& xi, const SpectralField& zeta,
                                 double eps, double alpha, const BasisTable& table) {
  check_pair_params(eps, alpha);
  std::vector<double> vx, vz;
  table.eval_field(xi, vx);
  table.eval_field(zeta, vz);
  for (std::size_t q = 0; q < vx.size(); ++q)
    vx[q] = (xlogx(vx[q]) - xlogx(vz[q])) * (vx[q] - vz[q]);
  double lhs = table.grid().integrate_values(vx);

  SpectralField d(std::max(xi.level(), zeta.level()));
  for (int j = 0; j < d.level(); ++j) {
    double a = j < xi.level() ? xi.coeffs[static_cast<std::size_t>(j)] : 0.0;
    double b = j < zeta.level() ? zeta.coeffs[static_cast<std::size_t>(j)] : 0.0;
    d.coeffs[static_cast<std::size_t>(j)] = a - b;
  }
  double d2 = d.l2_norm_sq();
  double dd = static_cast<double>(table.domain().dimension);
  double rhs = eps * d.sobolev_norm_sq(table.domain()) +
               (1.0 + 0.25 * dd * std::log(1.0 / eps)) * d2 + sq_log_norm(d2) +
               one_sided_terms(xi, zeta, alpha) * std::pow(d2, alpha);
  return {lhs, rhs};
}

BoundPair log_diff_pairing_bound(const SpectralField& xi, const SpectralField& zeta,
                                 double eps, double alpha, const Domain& dom) {
  int lvl = std::max(1, std::max(xi.level(), zeta.level()));
  return log_diff_pairing_bound(xi, zeta, eps, alpha, BasisTable(dom, lvl));
}

BoundPair log_plus_weighted_bound(const SpectralField& xi, const SpectralField& zeta,
                                  double eps, double alpha, const BasisTable& table) {
  check_pair_params(eps, alpha);
  std::vector<double> vx, vz;
  table.eval_field(xi, vx);
  table.eval_field(zeta, vz);
  for (std::size_t q = 0; q < vx.size(); ++q) {
    double diff = vx[q] - vz[q];
    vx[q] = diff * diff * log_plus(std::max(std::fabs(vx[q]), std::fabs(vz[q])));
  }
  double lhs = table.grid().integrate_values(vx);

  SpectralField d(std::max(xi.level(), zeta.level()));
  for (int j = 0; j < d.level(); ++j) {
    double a = j < xi.level() ? xi.coeffs[static_cast<std::size_t>(j)] : 0.0;
    double b = j < zeta.level() ? zeta.coeffs[static_cast<std::size_t>(j)] : 0.0;
    d.coeffs[static_cast<std::size_t>(j)] = a - b;
  }
  double d2 = d.l2_norm_sq();
  const Domain& dom = table.domain();
  double dd = static_cast<double>(dom.dimension);
  double c = 1.0 / (2.0 * (1.0 - alpha) * std::numbers::e);
  double rhs = eps * d.sobolev_norm_sq(dom) +
               0.25 * dd * std::log(1.0 / eps) * d2 + sq_log_norm(d2) +
               one_sided_terms(xi, zeta, alpha) * std::pow(d2, alpha) +
               c * std::pow(4.0 * dom.length, 1.0 - alpha) * std::pow(d2, alpha);
  return {lhs, rhs};
}

BoundPair log_plus_weighted_bound(const SpectralField& xi, const SpectralField& zeta,
                                  double eps, double alpha, const Domain& dom) {
  int lvl = std::max(1, std::max(xi.level(), zeta.level()));
  return log_plus_weighted_bound(xi, zeta, eps, alpha, BasisTable(dom, lvl));
}

}  // namespace logheat
