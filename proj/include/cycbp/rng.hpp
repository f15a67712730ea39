#pragma once

#include <cstdint>
#include <random>

namespace cycbp {

// splitmix64 finalizer; used to derive independent sub-stream seeds.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) { return mix64(mix64(a) ^ b); }
inline uint64_t mix64(uint64_t a, uint64_t b, uint64_t c) {
  return mix64(mix64(a, b) ^ c);
}

// Deterministic random stream. The engine is std::mt19937_64 (bit-exact per
// the standard); uniform/normal transforms are written out explicitly so that
// sampled values do not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(mix64(seed)) {}

  // Independent stream identified by (master seed, stream id); streams with
  // distinct ids never overlap in practice.
  static Rng substream(uint64_t master, uint64_t id) { return Rng(mix64(master, id)); }
  static Rng substream(uint64_t master, uint64_t tag, uint64_t id) {
    return Rng(mix64(master, tag, id));
  }

  uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Fair coin on {+1, -1}.
  int spin() { return (engine_() >> 63) ? -1 : +1; }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cycbp
