#pragma once

#include <string>
#include <vector>

#include "safebandit/distribution.hpp"
#include "safebandit/state.hpp"

namespace safebandit {

/**
 * A validated problem instance: K arms with finite-support reward priors,
 * plus the implicit safe arm of value 0 (arm index 0).
 *
 * Arms are addressed by 1-based indices 1..K. Validation rejects arms whose
 * prior mean is within kZeroMeanEpsilon of 0 (the terminality tests need a
 * clean sign) and instances with more than kMaxArms arms (2^K subset states).
 * Immutable after construction and safely shareable across threads.
 */
class Instance {
public:
    static constexpr int kMaxArms = 20;
    static constexpr double kZeroMeanEpsilon = 1e-9;

    /// Validates and builds an instance. Throws ValidationError.
    static Instance validate(std::vector<DiscreteDistribution> arms);

    /// Parses `{"arms": [{"support": [[value, prob], ...]}, ...]}`.
    /// Values and probabilities may be JSON numbers or decimal strings.
    static Instance from_json_text(const std::string& text);
    static Instance from_json_file(const std::string& path);

    int arm_count() const { return static_cast<int>(arms_.size()); }
    const DiscreteDistribution& distribution(int arm) const { return arms_[arm - 1]; }
    double mean(int arm) const { return means_[arm - 1]; }
    bool is_above(int arm) const { return means_[arm - 1] > 0.0; }

    StateSet full_state() const { return StateSet::full(arm_count()); }
    std::uint32_t above_mask() const { return above_mask_; }
    std::uint32_t below_mask() const { return below_mask_; }
    int above_count() const { return __builtin_popcount(above_mask_); }
    int below_count() const { return __builtin_popcount(below_mask_); }

private:
    Instance(std::vector<DiscreteDistribution> arms, std::vector<double> means,
             std::uint32_t above_mask, std::uint32_t below_mask)
        : arms_(std::move(arms)), means_(std::move(means)),
          above_mask_(above_mask), below_mask_(below_mask) {}

    std::vector<DiscreteDistribution> arms_;
    std::vector<double> means_;
    std::uint32_t above_mask_;
    std::uint32_t below_mask_;
};

struct Partition {
    StateSet above;
    StateSet below;
};

/// Splits a state into its positive-mean and negative-mean members.
inline Partition partition(const Instance& inst, StateSet s) {
    return Partition{s.intersect(inst.above_mask()), s.intersect(inst.below_mask())};
}

/// Smallest positive support value across all arms (+inf when none exists).
double smallest_positive_support(const Instance& inst);
/// Largest support value across all arms.
double largest_support(const Instance& inst);
/// Max |mean| over below arms (0 when below(A) is empty).
double below_gamma(const Instance& inst);

} // namespace safebandit
