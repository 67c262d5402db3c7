// rng.hpp - seeded random draws with explicit arithmetic.
//
// std::mt19937_64 output is pinned by the standard, but the distribution
// adapters are not; doing the reductions by hand keeps streams identical
// across standard libraries, which the determinism contracts require.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qoscompose/model.hpp"

namespace qosc {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Unbiased integer in [0, n) by rejection.
    std::size_t uniform(std::size_t n) {
        if (n == 0) throw ValidationError("uniform draw over empty range");
        if (n == 1) return 0;
        const std::uint64_t span = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return static_cast<std::size_t>(x % span);
    }

    // Uniform in [0, 1) with 53 significant bits.
    double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform01() < p;
    }

    // Uniform in [lo, hi).
    double uniform_real(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Index drawn proportionally to non-negative integer weights.
    std::size_t weighted(const std::vector<std::uint64_t>& weights) {
        std::uint64_t total = 0;
        for (const std::uint64_t w : weights) total += w;
        if (total == 0) throw ValidationError("weighted draw over zero mass");
        std::uint64_t x = static_cast<std::uint64_t>(
            uniform(static_cast<std::size_t>(total)));
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (x < weights[i]) return i;
            x -= weights[i];
        }
        return weights.size() - 1;  // unreachable
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace qosc
