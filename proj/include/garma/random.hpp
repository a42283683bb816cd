#pragma once

#include <cstdint>
#include <random>

namespace garma {

/// Seeded 64-bit generator with platform-independent uniform, normal and
/// bounded-integer draws. The standard library distributions are avoided
/// because their output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform();

  /// Standard normal via the Marsaglia polar method.
  double normal();

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Derives an independent sub-seed for stream `index` of a base seed
/// (splitmix64 finalizer over the pair).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace garma
