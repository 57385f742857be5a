#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace treelearn {

/// Deterministic pseudo-random stream: identical seed, identical draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform draw in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  bool coin() { return (gen_() & 1u) != 0; }

  /// Uniform real in [0, 1).
  double real() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Geometric draw with the given mean (support {0, 1, 2, ...}).
  std::uint64_t geometric(double mean) {
    if (mean <= 0.0) return 0;
    const double p = 1.0 / (1.0 + mean);
    double u = real();
    if (u <= 0.0) u = 0x1.0p-53;
    return static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
  }

 private:
  std::mt19937_64 gen_;
};

/// splitmix64 finalizer; used to derive independent per-run seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace treelearn
