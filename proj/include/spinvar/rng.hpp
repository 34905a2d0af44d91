// Copyright 2026 The Spinvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace spinvar {

// splitmix64 (Vigna); used only to mix seeds, never as the sampling engine.
struct SplitMix64 {
  std::uint64_t state;

  constexpr explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

/// Seed for the `counter`-th independent stream of a master seed. Sampling
/// code derives one stream per sample index, so results do not depend on how
/// samples are distributed over worker threads.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  SplitMix64 mixer(master + counter * 0x9E3779B97F4A7C15ULL);
  return mixer.next();
}

/// Deterministic random stream. Uniform and normal variates are generated
/// with explicit arithmetic on raw 64-bit draws; std::* distributions are
/// avoided because their output is implementation-defined.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Two independent standard normals (Box-Muller).
  std::pair<double, double> normal_pair() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace spinvar
