#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "safebandit/gmdp.hpp"
#include "safebandit/instance.hpp"
#include "safebandit/portfolio.hpp"
#include "safebandit/rng.hpp"

namespace safebandit {

/// One value per arm, drawn once and fixed for the whole episode.
struct Realization {
    std::vector<double> x; // x[arm - 1]

    double value(int arm) const { return x[arm - 1]; }

    /// Draws every arm with the inverse-CDF convention, arms in ascending
    /// index order. Consumes exactly K uniforms from the stream.
    static Realization draw(const Instance& inst, Rng& rng);
};

enum class Variant { Segb, SegbPrime };

enum class TerminalMode { ExploitBest, SafeArmForever, HorizonDuringExploration };

struct RoundLog {
    std::int64_t t = 0;                // 1-based round index
    Portfolio portfolio;               // what was played
    int realized_arm = 0;              // 0..K (0 = safe arm)
    std::optional<int> newly_explored; // set when the realized arm was unexplored
    double reward = 0.0;               // r_t, the Bayesian expectation of the portfolio
    double safety_margin = 0.0;        // identical quantity, audited against -tol
    const char* phase = "";            // ogp / above / bernoulli / exploit / safe
};

struct EpisodeResult {
    std::vector<RoundLog> rounds; // empty unless record_rounds
    double utility = 0.0;         // sum of round rewards
    std::int64_t exploration_rounds = 0; // rounds before the absorbing play-forever mode
    TerminalMode terminal_mode = TerminalMode::SafeArmForever;
    std::int64_t safety_violations = 0; // rounds with margin < -tol; must stay 0
};

/**
 * One finite-horizon episode of the safe explore-and-exploit algorithm.
 *
 * Phase 1 follows the goal-MDP policy (ogp_action) on the shrinking set of
 * unexplored arms and stops on the first positive realization or at a
 * terminal state. On a positive discovery the Segb variant explores the
 * remaining above arms with singletons, reveals every remaining arm through
 * Bernoulli trials that mix the best known arm with one unexplored arm, and
 * then exploits the best realized arm forever; without a positive discovery
 * it plays the safe arm forever. SegbPrime orders above arms by decreasing
 * mean in phase 1 and exploits immediately once a positive value is seen
 * (optimal for two-point supports).
 *
 * Every round's portfolio is audited against the current beliefs; r_t is the
 * portfolio's Bayesian expectation, using known values for explored arms.
 * Throws HorizonZero when T < 1.
 */
EpisodeResult run_segb_episode(const Instance& inst, const Realization& realization,
                               std::int64_t T, Rng& rng, Variant variant,
                               bool record_rounds = true, double tol = 1e-9);

/// Realization-dependent convergence quantities.
struct DeltaGamma {
    std::optional<double> delta1; // lowest positive realized value among below arms
    std::optional<double> delta2; // highest positive realized value among above arms
    std::optional<double> delta;  // max of the present components
    double gamma = 0.0;           // max |mu| over below arms (0 if none)
};

DeltaGamma realized_delta_gamma(const Instance& inst, const Realization& realization);

/**
 * Surrogate lower bound on the horizon-T utility of the algorithm:
 * (T - K(1 + gamma/delta_lower)) * w_star. Throws BoundVacuous when the
 * horizon does not clear the expected exploration cost.
 */
double convergence_floor(const Instance& inst, double T, double delta_lower, double w_star);

} // namespace safebandit
