#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace nmfz {

/// Deterministic uniform stream. Doubles are built directly from the top 53
/// bits of mt19937_64 output (never through std::uniform_real_distribution,
/// whose sequence is implementation-defined), so a seed reproduces the same
/// values on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Uniform integer in [0, n), unbiased via rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; the standard avalanching step.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Folds a list of values into a base seed. Used to derive independent
/// per-run and per-phase seeds: the result depends on every part and on
/// their order, not on any enclosing iteration sequence.
inline std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = mix64(base);
    for (std::uint64_t p : parts) h = mix64(h ^ p);
    return h;
}

} // namespace nmfz
