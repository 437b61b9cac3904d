#pragma once

#include <cstdint>

#include "lcqft/rational.hpp"

namespace lcqft {

// Deterministic generator used for seeded instance generation. Hand-rolled
// so reports are byte-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n).
  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

  // Uniform in [lo, hi] inclusive.
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  bool flip() { return (next() & 1) != 0; }

  // Small exact rational with numerator in [-max_num, max_num] and
  // denominator in [1, max_den].
  Rational small_rational(long max_num = 3, long max_den = 3) {
    return rat(range(-max_num, max_num), range(1, max_den));
  }

  Rational positive_rational(long max_num = 3, long max_den = 3) {
    return rat(range(1, max_num), range(1, max_den));
  }

 private:
  uint64_t state_;
};

}  // namespace lcqft
