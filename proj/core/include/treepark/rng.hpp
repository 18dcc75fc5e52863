#pragma once

#include <cstdint>
#include <random>

namespace treepark {

/// Deterministic 64-bit engine. mt19937_64 has a standardized output
/// sequence, so a given seed reproduces the same stream on every platform;
/// all sampling goes through u01() rather than std::*_distribution, whose
/// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform double in [0,1) with 53 random bits.
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be >= 1.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(u01() * static_cast<double>(n)) % n;
  }

 private:
  std::mt19937_64 eng_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Per-replicate seed stream: seed_i = mix(master_seed, i).
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 1));
}

}  // namespace treepark
