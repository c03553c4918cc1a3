#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ftattn/types.hpp"

namespace ftattn {

/// Mixes a 64-bit value into a well-distributed seed (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic random stream. The engine is std::mt19937_64 (algorithm
/// pinned by the standard); all distributions are derived here from raw
/// bits so sequences depend only on (seed, call order), never on the
/// standard library's unspecified distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  /// Independent stream derived from (seed, stream id). Streams with
  /// distinct ids never share state.
  static Rng split(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix_seed(seed) ^ mix_seed(stream * 0x9e3779b97f4a7c15ULL + 0x1234567));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  Real uniform() { return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53; }

  Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), rejection-sampled (no modulo bias).
  int uniform_int(int n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return static_cast<int>(x % bound);
  }

  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  Real normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    Real u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const Real u2 = uniform();
    const Real radius = std::sqrt(-2.0 * std::log(u1));
    const Real angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Index drawn from an unnormalized non-negative weight vector.
  int categorical(const Vector& probs) {
    const Real total = probs.sum();
    Real u = uniform() * total;
    for (Index k = 0; k + 1 < probs.size(); ++k) {
      u -= probs[k];
      if (u < 0.0) return static_cast<int>(k);
    }
    return static_cast<int>(probs.size() - 1);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  Real spare_ = 0.0;
};

}  // namespace ftattn
