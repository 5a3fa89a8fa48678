#pragma once

#include <cstdint>
#include <random>

namespace stochmatch {

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// Seed of stream `index` under `master`. Streams for different indices are
// decorrelated and do not depend on how many streams are in use, so replication
// r always sees the same randomness.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Seeded generator used for every random draw in the library. Uniforms are
// built from the top 53 bits so values are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_positive() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // True with probability p; p <= 0 never, p >= 1 always.
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stochmatch
