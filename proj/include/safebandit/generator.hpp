#pragma once

#include <cstdint>

#include "safebandit/instance.hpp"
#include "safebandit/rng.hpp"

namespace safebandit {

enum class GenMode { DominanceChain, Unrestricted, TwoPoint, OneAbove };

struct GenConfig {
    GenMode mode = GenMode::Unrestricted;
    int min_above = 1;
    int max_above = 3;
    int min_below = 1;
    int max_below = 3;
    int max_support = 4;
    int value_span = 4;      // support values on the grid k/8, |k/8| <= value_span
    int two_point_high = 3;  // H for TwoPoint mode (shared support {-1, H})
};

/**
 * Seeded random instance factory for the verification suites.
 *
 * All values are dyadic rationals (eighths) and all probabilities are
 * sixty-fourths summing to exactly 1, so generated instances carry no
 * floating-point validation slack. DominanceChain builds the below arms by
 * shifting one common base support, which preserves first-order dominance
 * exactly; the chain is double-checked with stochastically_dominates.
 * TwoPoint arms share the support {-1, H}.
 */
class InstanceGenerator {
public:
    InstanceGenerator(const GenConfig& config, std::uint64_t seed)
        : config_(config), rng_(seed) {}

    Instance next();

    const GenConfig& config() const { return config_; }

private:
    GenConfig config_;
    Rng rng_;
};

} // namespace safebandit
