#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logheat/control.hpp"
#include "logheat/spectral.hpp"

namespace logheat {

// One atom of the discretized mark space: intensity weight w > 0 and the
// per-mark amplitudes h1 >= 0 (Lipschitz modulus) and h2 in [0, 1] (growth
// modulus). The noise families below use h1 as the mark amplitude h(z).
struct MarkAtom {
  double weight = 1.0;
  double h1 = 1.0;
  double h2 = 1.0;
};

struct MarkSpace {
  std::vector<MarkAtom> atoms;

  int size() const { return static_cast<int>(atoms.size()); }
  double total_intensity() const;
  void validate() const;
};

struct JumpEvent {
  double time;
  int atom;
  int multiplicity = 1;
};

enum class NoiseFamily {
  Tanh,       // h(z) (M1 + M2 tanh(u)); bounded, globally Lipschitz
  SoftPower,  // h(z) (M1 + M2 u / (1+|u|)^{1-theta}); exercises theta > 0
  LogLip,     // h(z) scale u min(1, log_+(|u|)^{1/2}) / (1+|u|^{1-theta})
};

// Pluggable noise coefficient eta(u; z) with sub-linear growth
// |eta(u;z)| <= (M1 + M2 |u|^theta) h(z).
struct NoiseCoefficient {
  NoiseFamily family = NoiseFamily::Tanh;
  double m1 = 0.5;
  double m2 = 0.5;
  double theta = 0.0;  // in [0, 1)
  double k1 = 0.5;     // Lipschitz modulus (reported; certified by sampling)
  double k2 = 0.0;     // log_+^{1/2} modulus
  double scale = 1.0;  // LogLip prefactor

  double pointwise(double u, const MarkAtom& z) const;
  bool trivially_zero() const;
  void validate() const;
};

NoiseFamily noise_family_from_name(const std::string& name);
std::string noise_family_name(NoiseFamily family);

// Poisson random measure on [0, T] x atoms with intensity
// rate_scale * w_i per atom: interarrivals at the total rate, atom chosen
// proportionally to the weights. Deterministic in the seed.
std::vector<JumpEvent> sample_prm(const MarkSpace& ms, double horizon,
                                  double rate_scale, std::uint64_t seed);

// Controlled PRM via thinning: per atom, a dominating PRM at intensity
// base_scale * sup_t phi(t, atom) * w_i, candidates accepted with probability
// phi(s, atom) / sup phi. Realizes intensity phi * (base_scale * m).
// Events are merged across atoms in (time, atom) order.
std::vector<JumpEvent> sample_controlled_prm(const MarkSpace& ms, double horizon,
                                             double base_scale, const Control& phi,
                                             std::uint64_t seed);

// Spectral projection of x -> eta(u(x); z_atom): coefficient k is
// int e_k(x) eta(u(x); z) dx. This is the jump coefficient H assembled
// vectorially; output level equals table.level().
SpectralField eta_eval(const NoiseCoefficient& nc, const MarkAtom& atom,
                       const SpectralField& u, const BasisTable& table);
SpectralField eta_eval(const NoiseCoefficient& nc, const MarkAtom& atom,
                       const SpectralField& u, const Domain& dom);

// Sampled certification of the declared coefficient moduli; each returns the
// worst-case ratio over `samples` random inputs (<= 1 means the declared
// modulus held).
struct NoiseCertification {
  double worst_growth_ratio;     // |eta| / ((M1 + M2|u|^theta) h)
  double worst_lipschitz_ratio;  // |eta(u)-eta(v)| / ((K1|u-v| + K2|u-v|log_+^.5) h)
  double worst_l2_lipschitz_ratio;  // ||eta(u)-eta(v)||_2 / (K1 h ||u-v||_2)
};
NoiseCertification certify_noise(const NoiseCoefficient& nc, const MarkSpace& ms,
                                 int samples, std::uint64_t seed,
                                 const Domain& dom);

}  // namespace logheat
