#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace xg {

// All randomness in the library flows through this header. Engines are
// std::mt19937_64 (bit-exact across platforms per the standard); every
// variate conversion is spelled out by hand because the std::*_distribution
// classes are implementation-defined. Outputs are therefore reproducible
// from (seed, stream ids) alone, independent of scheduling.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and stream ids.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64(h ^ splitmix64(a));
  h = splitmix64(h ^ splitmix64(b ^ 0xbb67ae8584caa73bULL));
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform double in [0, 1), 53 bits of precision.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), n >= 1. Multiply-shift; bias < 2^-64.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(eng_()) * n) >> 64);
  }

  /// Fair +/-1.
  int sign() { return (eng_() >> 63) ? -1 : 1; }

  /// Standard exponential via inversion.
  double exponential() { return -std::log1p(-uniform()); }

  /// Standard normal, Box-Muller (pairless form; one variate per call).
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace xg
