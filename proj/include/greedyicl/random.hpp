#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace greedyicl {

// Thin wrapper over mt19937_64 with explicitly defined integer and real
// draws, so sequences do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer in the closed range [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t k = items.size(); k > 1; --k) {
      const auto j = static_cast<std::size_t>(below(k));
      std::swap(items[k - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; derives independent child seeds from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace greedyicl
