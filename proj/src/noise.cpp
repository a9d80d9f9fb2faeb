#include "logheat/noise.hpp"

#include <algorithm>
#include <cmath>

#include "logheat/rng.hpp"

namespace logheat {

double MarkSpace::total_intensity() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

void MarkSpace::validate() const {
  if (atoms.empty()) throw ConfigurationError("mark space: needs at least one atom");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& a = atoms[i];
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw ConfigurationError("mark space: atom weight must be positive and finite");
    if (!(a.h1 >= 0.0) || !std::isfinite(a.h1))
      throw ConfigurationError("mark space: h1 must be nonnegative and finite");
    if (!(a.h2 >= 0.0 && a.h2 <= 1.0))
      throw ConfigurationError("mark space: h2 must lie in [0, 1]");
  }
}

double NoiseCoefficient::pointwise(double u, const MarkAtom& z) const {
  switch (family) {
    case NoiseFamily::Tanh:
      return z.h1 * (m1 + m2 * std::tanh(u));
    case NoiseFamily::SoftPower:
      return z.h1 * (m1 + m2 * u / std::pow(1.0 + std::fabs(u), 1.0 - theta));
    case NoiseFamily::LogLip: {
      double mod = std::min(1.0, std::sqrt(log_plus(std::fabs(u))));
      return z.h1 * scale * u * mod / (1.0 + std::pow(std::fabs(u), 1.0 - theta));
    }
  }
  return 0.0;
}

bool NoiseCoefficient::trivially_zero() const { return m1 == 0.0 && m2 == 0.0; }

void NoiseCoefficient::validate() const {
  if (!(m1 >= 0.0) || !(m2 >= 0.0))
    throw ConfigurationError("noise: M1, M2 must be nonnegative");
  if (!(theta >= 0.0 && theta < 1.0))
    throw ConfigurationError("noise: theta must lie in [0,1)");
  if (!(k1 >= 0.0) || !(k2 >= 0.0))
    throw ConfigurationError("noise: K1, K2 must be nonnegative");
  if (!(scale >= 0.0)) throw ConfigurationError("noise: scale must be nonnegative");
}

NoiseFamily noise_family_from_name(const std::string& name) {
  if (name == "tanh") return NoiseFamily::Tanh;
  if (name == "softpower") return NoiseFamily::SoftPower;
  if (name == "loglip") return NoiseFamily::LogLip;
  throw ConfigurationError("noise: unknown family '" + name + "'");
}

std::string noise_family_name(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::Tanh: return "tanh";
    case NoiseFamily::SoftPower: return "softpower";
    case NoiseFamily::LogLip: return "loglip";
  }
  return "?";
}

std::vector<JumpEvent> sample_prm(const MarkSpace& ms, double horizon,
                                  double rate_scale, std::uint64_t seed) {
  ms.validate();
  if (!(horizon > 0.0)) throw ConfigurationError("sample_prm: horizon must be positive");
  if (!(rate_scale > 0.0))
    throw ConfigurationError("sample_prm: rate_scale must be positive");
  double total = rate_scale * ms.total_intensity();
  CounterRng rng(seed, 0x70726dULL, 0);
  std::vector<JumpEvent> events;
  double t = 0.0;
  for (;;) {
    t += rng.next_exponential(total);
    if (t > horizon) break;
    double u = rng.next_uniform() * ms.total_intensity();
    int atom = 0;
    double acc = ms.atoms[0].weight;
    while (u > acc && atom + 1 < ms.size()) acc += ms.atoms[static_cast<std::size_t>(++atom)].weight;
    events.push_back({t, atom, 1});
  }
  return events;
}

std::vector<JumpEvent> sample_controlled_prm(const MarkSpace& ms, double horizon,
                                             double base_scale, const Control& phi,
                                             std::uint64_t seed) {
  ms.validate();
  if (!(horizon > 0.0))
    throw ConfigurationError("sample_controlled_prm: horizon must be positive");
  if (!(base_scale > 0.0))
    throw ConfigurationError("sample_controlled_prm: base_scale must be positive");
  if (phi.atoms() != ms.size())
    throw ConfigurationError(
        "sample_controlled_prm: control atoms do not match the mark space");
  std::vector<JumpEvent> events;
  for (int i = 0; i < ms.size(); ++i) {
    double sup = phi.sup_atom(i);
    if (sup == 0.0) continue;
    double rate = base_scale * sup * ms.atoms[static_cast<std::size_t>(i)].weight;
    CounterRng rng(seed, 0x61746f6dULL, static_cast<std::uint64_t>(i));
    double t = 0.0;
    for (;;) {
      t += rng.next_exponential(rate);
      if (t > horizon) break;
      double u = rng.next_uniform();
      if (u * sup <= phi.at(t, i)) events.push_back({t, i, 1});
    }
  }
  std::sort(events.begin(), events.end(), [](const JumpEvent& a, const JumpEvent& b) {
    return a.time != b.time ? a.time < b.time : a.atom < b.atom;
  });
  return events;
}

SpectralField eta_eval(const NoiseCoefficient& nc, const MarkAtom& atom,
                       const SpectralField& u, const BasisTable& table) {
  std::vector<double> vals;
  table.eval_field(u, vals);
  for (double& v : vals) v = nc.pointwise(v, atom);
  return table.project_values(vals, table.level());
}

SpectralField eta_eval(const NoiseCoefficient& nc, const MarkAtom& atom,
                       const SpectralField& u, const Domain& dom) {
  return eta_eval(nc, atom, u, BasisTable(dom, std::max(1, u.level())));
}

NoiseCertification certify_noise(const NoiseCoefficient& nc, const MarkSpace& ms,
                                 int samples, std::uint64_t seed, const Domain& dom) {
  nc.validate();
  ms.validate();
  CounterRng rng(seed, 0x63657274ULL, 0);
  NoiseCertification out{0.0, 0.0, 0.0};
  const double tiny = 1e-14;
  for (int s = 0; s < samples; ++s) {
    const MarkAtom& z = ms.atoms[static_cast<std::size_t>(
        rng.next_below(static_cast<std::uint64_t>(ms.size())))];
    double u = rng.next_range(-20.0, 20.0);
    double v = rng.next_range(-20.0, 20.0);
    double eu = nc.pointwise(u, z);
    double ev = nc.pointwise(v, z);
    double growth_cap = (nc.m1 + nc.m2 * std::pow(std::fabs(u), nc.theta)) * z.h1;
    if (growth_cap > tiny)
      out.worst_growth_ratio = std::max(out.worst_growth_ratio,
                                        std::fabs(eu) / growth_cap);
    double du = std::fabs(u - v);
    double lip_cap =
        (nc.k1 * du + nc.k2 * du * std::sqrt(log_plus(std::max(std::fabs(u), std::fabs(v))))) *
        z.h1;
    if (lip_cap > tiny)
      out.worst_lipschitz_ratio =
          std::max(out.worst_lipschitz_ratio, std::fabs(eu - ev) / lip_cap);
  }
  // L2 Lipschitz ratio over random field pairs at a modest level.
  const int level = 8;
  BasisTable table(dom, level);
  int field_samples = std::max(8, samples / 50);
  for (int s = 0; s < field_samples; ++s) {
    const MarkAtom& z = ms.atoms[static_cast<std::size_t>(
        rng.next_below(static_cast<std::uint64_t>(ms.size())))];
    SpectralField a(level), b(level);
    for (int j = 0; j < level; ++j) {
      a.coeffs[static_cast<std::size_t>(j)] = rng.next_range(-3.0, 3.0);
      b.coeffs[static_cast<std::size_t>(j)] = rng.next_range(-3.0, 3.0);
    }
    std::vector<double> va, vb;
    table.eval_field(a, va);
    table.eval_field(b, vb);
    double num = 0.0;
    for (std::size_t q = 0; q < va.size(); ++q) {
      double d = nc.pointwise(va[q], z) - nc.pointwise(vb[q], z);
      num += table.grid().weights()[q] * d * d;
    }
    SpectralField diff(level);
    for (int j = 0; j < level; ++j)
      diff.coeffs[static_cast<std::size_t>(j)] =
          a.coeffs[static_cast<std::size_t>(j)] - b.coeffs[static_cast<std::size_t>(j)];
    double den = nc.k1 * z.h1 * diff.l2_norm();
    if (den > tiny)
      out.worst_l2_lipschitz_ratio =
          std::max(out.worst_l2_lipschitz_ratio, std::sqrt(num) / den);
  }
  return out;
}

}  // namespace logheat
