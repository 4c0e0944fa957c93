#pragma once

#include <cstdint>
#include <random>

namespace mnp {

/// Deterministic 64-bit generator (std::mt19937_64, whose output sequence is
/// fixed by the standard) with explicit stream splitting: substream k of
/// seed s is seeded with splitmix64(s + (k + 1) * golden).
class Rng {
 public:
  enum Stream : std::uint64_t { matrix = 0, rhs = 1, support = 2, coefficients = 3 };

  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  bool bernoulli(double p) { return unit() < p; }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Combine a base seed with small indices (cell, run, ...) into a new seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace mnp
