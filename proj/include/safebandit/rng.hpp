#pragma once

#include <cstdint>

namespace safebandit {

/**
 * Deterministic 64-bit PRNG used for every stochastic component of the
 * library (reward realizations, portfolio coin flips, instance generation).
 *
 * The generator is SplitMix64: the state advances by the golden-gamma
 * constant and the output is the murmur-style finalizer. Uniform doubles are
 * built from the top 53 bits, so sequences are bit-identical across
 * platforms and compilers. std::uniform_real_distribution is intentionally
 * avoided (its output is implementation-defined).
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// True with probability p.
    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0, n), n >= 1. Lemire multiply-shift, bias < 2^-64.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    std::uint64_t state_;
};

/**
 * Stable per-episode seed derivation: episode e of a Monte-Carlo run with
 * master seed m draws all of its randomness from Rng(episode_seed(m, e)).
 *
 * The mix is two SplitMix64 finalizer rounds applied to
 * m + (e + 1) * 0x9E3779B97F4A7C15. This mapping is part of the output
 * format contract (results must be reproducible independently of episode
 * scheduling) and must not change between releases.
 */
inline std::uint64_t episode_seed(std::uint64_t master_seed, std::uint64_t episode_index) {
    auto finalize = [](std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    return finalize(finalize(master_seed + (episode_index + 1) * 0x9E3779B97F4A7C15ULL));
}

} // namespace safebandit
