#pragma once

#include <cstdint>
#include <random>

#include "punfold/vec.hpp"

namespace punfold {

// Deterministic random source. The engine is the standardized mt19937_64;
// all derived values (doubles, bounded ints, unit vectors) are produced by
// explicit code here instead of std distributions, whose output is
// implementation defined. Identical seeds give identical streams on every
// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in {0, ..., n-1}. Rejection sampling, unbiased.
  int next_index(int n) {
    if (n <= 1) return 0;
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return static_cast<int>(v % un);
  }

  // Uniform direction on the unit sphere (rejection in the cube).
  Vec3 unit_vector() {
    for (;;) {
      Vec3 v{2.0 * next_double() - 1.0, 2.0 * next_double() - 1.0,
             2.0 * next_double() - 1.0};
      double n2 = norm2(v);
      if (n2 > 1e-12 && n2 <= 1.0) return v * (1.0 / std::sqrt(n2));
    }
  }

  // Derives an independent stream for a named stage of the pipeline.
  Rng split(std::uint64_t tag) const { return Rng(mix(seed_, tag)); }

  // splitmix64 finalizer over seed ^ tag.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed ^ (tag * 0x9E3779B97F4A7C15ull);
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Stage tags used to split the master seed into per-stage streams.
namespace rng_stream {
constexpr std::uint64_t kDecimate = 0x1;
constexpr std::uint64_t kObjective = 0x2;
constexpr std::uint64_t kTabu = 0x3;
constexpr std::uint64_t kInsertion = 0x4;
}  // namespace rng_stream

}  // namespace punfold
