#pragma once

// Seeded random streams. Every trial draws from its own stream derived from
// (base seed, path), so results never depend on scheduling.

#include <cstdint>
#include <initializer_list>
#include <cmath>
#include <random>

namespace emptytri {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of the substream reached from `base` by following `path`.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t s = mix64(base);
    for (auto p : path) s = mix64(s ^ mix64(p + 0x632BE59BD9B4E019ULL));
    return s;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

    /// Poisson variate; inversion for small means.
    std::int64_t poisson(double mean);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

inline std::int64_t Rng::poisson(double mean) {
    if (mean <= 0) return 0;
    if (mean > 30.0) return std::poisson_distribution<std::int64_t>(mean)(engine_);
    const double u = uniform();
    double p = std::exp(-mean), cdf = p;
    std::int64_t k = 0;
    while (u >= cdf && k < 1000) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

}  // namespace emptytri
