#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace toba {

/// Derives an independent sub-stream seed from a run seed and a stream name.
///
/// The name is hashed with FNV-1a, mixed with the seed, and passed through
/// splitmix64. Every consumer of randomness in a run uses its own named
/// stream ("split", "init", "dropout", "augment", "baseline"), so enabling one
/// component never shifts the draws seen by another.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index);

/// Portable random source: mt19937_64 plus hand-written transforms, so draws
/// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller (one value per call, no caching).
  double normal();
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t index(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const auto j = index(i);
      std::swap(first[static_cast<std::ptrdiff_t>(i - 1)], first[static_cast<std::ptrdiff_t>(j)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace toba
