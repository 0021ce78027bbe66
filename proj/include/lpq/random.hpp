#pragma once

#include <cstdint>
#include <random>

namespace lpq {

/// Seeded engine used everywhere a draw is needed. std::mt19937_64 output is
/// fixed by the standard, and the conversions below avoid the
/// implementation-defined std::*_distribution classes, so a seed reproduces
/// the same trajectory on every toolchain.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection sampling keeps the draw unbiased.
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    std::uint64_t next() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; derives independent child seeds (one per Monte-Carlo
/// run, one per sub-step) from a parent seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace lpq
