#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "safebandit/instance.hpp"
#include "safebandit/rng.hpp"

namespace safebandit {

/**
 * The decision maker's information state: for every arm either the prior
 * mean or the realized value once the arm has been explored. Known values
 * never revert. Episode-local, single writer.
 */
class Beliefs {
public:
    explicit Beliefs(const Instance& inst);

    /// Conditional expected value: 0 for the safe arm, the realized value
    /// for explored arms, the prior mean otherwise.
    double value(int arm) const;
    bool is_known(int arm) const { return arm != 0 && known_[arm - 1].has_value(); }
    void observe(int arm, double x);

private:
    std::vector<double> means_;
    std::vector<std::optional<double>> known_;
};

/**
 * A distribution over arm indices (0 = safe arm, 1..K = arms), the unit of
 * play each round. Weights sum to 1 within 1e-12; entries are kept sorted by
 * arm index, which also fixes the coin-flip convention in sample_arm().
 */
class Portfolio {
public:
    /// General portfolio over (arm, weight) entries.
    static Portfolio from_weights(std::vector<std::pair<int, double>> entries);

    /// Deterministic selection of one arm (arm 0 selects the safe arm).
    static Portfolio singleton(int arm);

    /**
     * The zero-expectation two-arm mix: weight(i) = -mu_j / (mu_i - mu_j),
     * weight(j) = mu_i / (mu_i - mu_j). This maximizes the probability of
     * exploring the inferior arm j subject to a non-negative prior value.
     * Throws SignViolation unless mu_i > 0 > mu_j.
     */
    static Portfolio pair(double mu_i, double mu_j, int i, int j);

    /**
     * The pair mix with arm i already realized at x_i > 0: weight(i) =
     * -mu_j / (x_i - mu_j), weight(j) = x_i / (x_i - mu_j). Zero Bayesian
     * expectation when arm i is known to be worth x_i.
     */
    static Portfolio realized_pair(double x_i, double mu_j, int i, int j);

    const std::vector<std::pair<int, double>>& entries() const { return entries_; }
    double weight(int arm) const;

    /// Bayesian expected value of the portfolio under the given beliefs.
    double expected_value(const Beliefs& beliefs) const;

    /// Nature's coin flip: inverse-CDF over entries in ascending arm order.
    int sample_arm(Rng& rng) const;

private:
    explicit Portfolio(std::vector<std::pair<int, double>> entries);
    std::vector<std::pair<int, double>> entries_;
};

/// Bayesian safety: expected value under the beliefs is >= -tol.
bool is_safe(const Portfolio& p, const Beliefs& beliefs, double tol = 1e-9);

/// Pair portfolio built from the instance's prior means.
Portfolio prior_pair(const Instance& inst, int i, int j);

} // namespace safebandit
