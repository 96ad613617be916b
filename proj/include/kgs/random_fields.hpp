#pragma once

// Deterministic random smooth compactly supported test fields. The generator
// avoids std::uniform_real_distribution so that a seed produces identical
// fields on every platform.

#include <cstdint>

#include "kgs/fields.hpp"

namespace kgs {

/// splitmix64; good enough for test-data generation and fully portable.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }          // [0,1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

/// Sum of a few random plane waves under a C^2 bump envelope (1-(r/r0)^2)^3,
/// centered at `center`, supported in |x-center| < r0.
ScalarField random_bump(const Grid& grid, Rng& rng, double r0, double k_max,
                        const Vec3& center = Vec3::Zero(), int modes = 6);

FieldPair random_bump_pair(const Grid& grid, std::uint64_t seed, double r0, double k_max,
                           const Vec3& center = Vec3::Zero(), int modes = 6);

}  // namespace kgs
