#include "logheat/comparison_ode.hpp"

#include <cmath>

namespace logheat {

namespace {

double lerp_at(const std::vector<double>& times, const std::vector<double>& v,
               std::size_t cell, double t) {
  double t0 = times[cell], t1 = times[cell + 1];
  double w = (t - t0) / (t1 - t0);
  return (1.0 - w) * v[cell] + w * v[cell + 1];
}

template <typename Rhs>
double rk4_over_cells(const std::vector<double>& times, double y0, int substeps,
                      const Rhs& rhs) {
  double y = y0;
  for (std::size_t c = 0; c + 1 < times.size(); ++c) {
    double h = (times[c + 1] - times[c]) / substeps;
    double t = times[c];
    for (int s = 0; s < substeps; ++s) {
      double k1 = rhs(c, t, y);
      double k2 = rhs(c, t + 0.5 * h, y + 0.5 * h * k1);
      double k3 = rhs(c, t + 0.5 * h, y + 0.5 * h * k2);
      double k4 = rhs(c, t + h, y + h * k3);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
    }
  }
  return y;
}

}  // namespace

double gronwall_equality_solution(const GronwallInputs& in, int substeps) {
  in.validate();
  auto rhs = [&](std::size_t cell, double t, double y) {
    double yv = std::max(y, 0.0);
    return lerp_at(in.times, in.f, cell, t) * yv +
           lerp_at(in.times, in.g, cell, t) * std::pow(yv, in.alpha);
  };
  return rk4_over_cells(in.times, in.C, substeps, rhs);
}

double log_gronwall_equality_solution(const LogGronwallInputs& in, int substeps) {
  in.validate();
  auto rhs = [&](std::size_t cell, double t, double y) {
    double hp = (in.h[cell + 1] - in.h[cell]) / (in.times[cell + 1] - in.times[cell]);
    double yv = std::max(y, kLogFloor);
    return hp + lerp_at(in.times, in.f, cell, t) * yv +
           lerp_at(in.times, in.g, cell, t) * yv * std::log(yv);
  };
  return rk4_over_cells(in.times, in.h.front(), substeps, rhs);
}

}  // namespace logheat
