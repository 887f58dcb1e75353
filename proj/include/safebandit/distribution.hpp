#pragma once

#include <vector>

#include "safebandit/rng.hpp"

namespace safebandit {

/**
 * Finite-support reward prior for one arm.
 *
 * Invariants enforced on construction: support non-empty, values strictly
 * increasing and finite, every probability in (0, 1], probabilities summing
 * to 1 within 1e-12.
 */
class DiscreteDistribution {
public:
    struct Atom {
        double value;
        double probability;
    };

    explicit DiscreteDistribution(std::vector<Atom> support);

    const std::vector<Atom>& support() const { return support_; }
    double mean() const { return mean_; }
    double min_value() const { return support_.front().value; }
    double max_value() const { return support_.back().value; }

    /// Pr(X <= v)
    double cdf(double v) const;
    /// Pr(X >= v)
    double tail(double v) const;
    /// Pr(X > 0)
    double pr_positive() const { return 1.0 - cdf(0.0); }
    /// Pr(X = v) for an exact support value (0 otherwise).
    double pr_eq(double v) const;

    /**
     * Inverse-CDF sample over the support in ascending order: a uniform draw
     * u selects the first support point whose cumulative probability
     * exceeds u. Pure function of (distribution, rng state).
     */
    double sample(Rng& rng) const;

private:
    std::vector<Atom> support_;
    double mean_;
};

/// First-order stochastic dominance: Pr(d1 >= x) >= Pr(d2 >= x) for every x.
/// Step CDFs make it sufficient to test at the union of support values.
bool stochastically_dominates(const DiscreteDistribution& d1, const DiscreteDistribution& d2);

} // namespace safebandit
