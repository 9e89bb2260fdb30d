#pragma once

#include <array>
#include <cstdint>

namespace tracegen {

/// Deterministic 64-bit generator: xoshiro256** with its state expanded from
/// the seed by splitmix64. All derived draws (uniform reals, bounded
/// integers) are implemented here rather than through <random>
/// distributions, so a seed yields the same stream on every platform and
/// standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64() noexcept;

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform01() noexcept;

    /// Uniform integer in [lo, hi], unbiased (rejection sampling).
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept;

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    /// Independent child stream. Consumes one draw from this stream.
    Rng split() noexcept;

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace tracegen
