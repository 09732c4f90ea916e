#pragma once

#include <cstdint>
#include <random>

#include "koblab/types.hpp"

namespace koblab {

/// Deterministic RNG wrapper. Every stochastic routine takes an explicit
/// seed; sub-tasks derive child seeds so parallel fan-out stays reproducible.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }
  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

  cx unit_complex() {
    double t = uniform(0.0, 2.0 * M_PI);
    return cx(std::cos(t), std::sin(t));
  }

  /// Uniform on the unit sphere of C^n (Gaussian normalization).
  Point unit_vector(int n) {
    Point p = zero_point(n);
    double s;
    do {
      for (int j = 0; j < n; ++j) p[j] = cx(gaussian(), gaussian());
      s = p.norm();
    } while (s < 1e-12);
    return (1.0 / s) * p;
  }

  /// Child seed derived by splitmix64; independent streams per index.
  static uint64_t child_seed(uint64_t seed, uint64_t index) {
    uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace koblab
