#pragma once

#include <vector>

#include "logheat/spectral.hpp"

namespace logheat {

// Executable certifiers for the analytic toolkit: the logarithmic Sobolev
// inequality, two nonlinear Gronwall bounds, and the logarithmic-difference
// estimates. Certifiers return signed gaps (bound minus certified quantity)
// so tests can assert quantitative slack.

// Gap of the log-Sobolev inequality
//   int |u|^2 log|u| dx <= eps ||u||_W^2 + (d/4) log(1/eps) ||u||_2^2
//                          + ||u||_2^2 log||u||_2 .
// Returns RHS - LHS; zero field gives 0.
double log_sobolev_gap(const SpectralField& u, double eps, const Domain& dom);
double log_sobolev_gap(const SpectralField& u, double eps, const BasisTable& table);

// Variant with log_+ inside the integral and the extra lambda(D)/(2e) term.
double log_sobolev_plus_gap(const SpectralField& u, double eps, const Domain& dom);
double log_sobolev_plus_gap(const SpectralField& u, double eps,
                            const BasisTable& table);

// Hypothesis data for y(t) <= C + int_{t0}^{t} (f y + g y^alpha) ds.
// f, g are tabulated on `times` (increasing, from t0 to t).
struct GronwallInputs {
  double C = 0.0;
  double alpha = 0.0;  // in [0, 1)
  std::vector<double> times;
  std::vector<double> f;
  std::vector<double> g;

  void validate() const;
};

// Closed-form conclusion
//   y(t) <= { C^{1-a} e^{(1-a) F(t)} + (1-a) int g(s) e^{(1-a)(F(t)-F(s))} ds }^{1/(1-a)}
// with F the running integral of f; integrals by trapezoid on the tabulation grid.
double nonlinear_gronwall_bound(const GronwallInputs& in);

// Hypothesis data for y(t) + a(t) <= h(t) + int f y + int g y log y,
// h nondecreasing with h(0) >= 1.
struct LogGronwallInputs {
  std::vector<double> times;
  std::vector<double> h;
  std::vector<double> f;
  std::vector<double> g;
  std::vector<double> a;

  void validate() const;
};

// Conclusion  y(t) + a(t) <= h(t)^{e^{G(t)}} exp{ e^{G(t)} int_0^t f e^{-G} },
// with G the running integral of g.
double log_gronwall_bound(const LogGronwallInputs& in);

struct BoundPair {
  double lhs;
  double rhs;
  double gap() const { return rhs - lhs; }
};

// Pairing estimate for the difference of logarithmic drifts:
//   (xi log|xi| - zeta log|zeta|, xi - zeta)
//     <= eps ||d||_W^2 + (1 + (d/4) log(1/eps)) ||d||_2^2 + ||d||_2^2 log||d||_2
//        + (1 / (2(1-a)e)) (||xi||^{2(1-a)} + ||zeta||^{2(1-a)}) ||d||_2^{2a}
// with d = xi - zeta.
BoundPair log_diff_pairing_bound(const SpectralField& xi, const SpectralField& zeta,
                                 double eps, double alpha, const Domain& dom);
BoundPair log_diff_pairing_bound(const SpectralField& xi, const SpectralField& zeta,
                                 double eps, double alpha, const BasisTable& table);

// Weighted log_+ estimate:
//   int |xi - zeta|^2 log_+(|xi| v |zeta|) dx
//     <= eps ||d||_W^2 + (d/4) log(1/eps) ||d||_2^2 + ||d||_2^2 log||d||_2
//        + (1 / (2(1-a)e)) (||xi||^{2(1-a)} + ||zeta||^{2(1-a)}) ||d||_2^{2a}
//        + (1 / (2(1-a)e)) (4 lambda(D))^{1-a} ||d||_2^{2a} .
BoundPair log_plus_weighted_bound(const SpectralField& xi, const SpectralField& zeta,
                                  double eps, double alpha, const Domain& dom);
BoundPair log_plus_weighted_bound(const SpectralField& xi, const SpectralField& zeta,
                                  double eps, double alpha, const BasisTable& table);

}  // namespace logheat
