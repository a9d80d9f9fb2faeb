#pragma once

#include <cmath>
#include <cstdint>

namespace logheat {

// Counter-based splittable generator. A stream is identified by a key derived
// from (seed, stream_a, stream_b); draws are a pure function of (key, counter),
// so ensembles indexed by (path, atom) are order-independent and reproducible
// regardless of worker scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream_a = 0,
                      std::uint64_t stream_b = 0)
      : key_(derive_key(seed, stream_a, stream_b)) {}

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t k = mix(seed + 0x9e3779b97f4a7c15ULL);
    k = mix(k ^ (a + 0xd1b54a32d192ed03ULL));
    k = mix(k ^ (b + 0x8cb92ba72f3d8dd7ULL));
    return k;
  }

  std::uint64_t next_u64() {
    std::uint64_t v = key_ + (++counter_) * 0x9e3779b97f4a7c15ULL;
    return mix(v);
  }

  // Uniform on (0, 1]; safe under log().
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double next_exponential(double rate) { return -std::log(next_uniform()) / rate; }

  // Uniform on [lo, hi).
  double next_range(double lo, double hi) {
    double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Seed derivation for ensembles: run seed root -> per-path seed. Per-atom
// streams are derived inside the samplers from (path seed, atom).
inline std::uint64_t path_seed(std::uint64_t seed_root, std::uint64_t path_id) {
  return CounterRng::derive_key(seed_root, path_id, 0x70617468ULL);
}

}  // namespace logheat
