// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace gi {

/// Seeded deterministic RNG. std::mt19937_64 output is pinned by the
/// standard, and the bounded draw below avoids the implementation-defined
/// std::uniform_int_distribution, so a seed reproduces byte-identical
/// streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform draw from [0, bound); bound > 0. Fixed-point multiply keeps the
  /// mapping platform-independent (bias < 2^-64, irrelevant here).
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * bound) >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace gi
