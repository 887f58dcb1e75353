#pragma once

#include <cstdint>

#include "safebandit/episode.hpp"
#include "safebandit/instance.hpp"

namespace safebandit {

struct McResult {
    double mean_utility = 0.0;
    double std_error = 0.0; // sample std / sqrt(episodes)
    double mean_exploration_rounds = 0.0;
    std::int64_t episodes = 0;
    std::int64_t safety_violations = 0; // summed over all episodes and rounds
};

/**
 * Estimates the horizon-T utility over independent episodes. Episode e draws
 * its realization and coin flips from Rng(episode_seed(master_seed, e)), so
 * the result is a pure function of (instance, T, episodes, master_seed,
 * variant) regardless of thread count or scheduling: per-episode outputs are
 * stored by index and reduced in a fixed order.
 */
McResult monte_carlo_utility(const Instance& inst, std::int64_t T, std::int64_t episodes,
                             std::uint64_t master_seed, Variant variant, int threads = 1);

} // namespace safebandit
