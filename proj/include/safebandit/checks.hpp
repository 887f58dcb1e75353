#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "safebandit/generator.hpp"
#include "safebandit/instance.hpp"

namespace safebandit {

/**
 * Machine-readable outcome of one numerical check. `passed` is equivalent to
 * max_deviation <= the check's declared tolerance (together with any
 * qualitative conditions the check asserts); `witness` describes the worst
 * deviation found. Negative-control reports are inverted at the boundary:
 * they pass iff the deliberately broken configuration was detected.
 */
struct CheckReport {
    std::string check_name;
    bool passed = false;
    double max_deviation = 0.0;
    std::string witness;
    std::int64_t trials = 0;
    std::int64_t elapsed_ms = 0;
};

/**
 * Reach probabilities are policy independent: for every instance, the
 * Q-tables of all enumerated ordered policies (when |above|! * |below|! <=
 * 5000) plus `policies_per_instance` sampled random policies agree at every
 * state within tol. Needs no dominance assumption; Unrestricted mode is the
 * intended configuration.
 */
CheckReport check_equivalence_lemma(const GenConfig& gen, std::uint64_t seed, int instances,
                                    int policies_per_instance, double tol);
CheckReport check_equivalence_negative_control(std::uint64_t seed, double tol);

/// On dominance-chain instances the greedy rule is exactly optimal:
/// max over states of |W(ogp, s) - W*(s)| <= tol per instance.
/// Throws GeneratorModeMismatch unless gen.mode == DominanceChain.
CheckReport check_ogp_optimality(const GenConfig& gen, std::uint64_t seed, int instances,
                                 double tol);
/// Reversed below-order on a counterexample-family instance must lose.
CheckReport check_ogp_negative_control(double tol);

/// One-above instances: the descending fstar_index order attains W*(A).
/// Throws GeneratorModeMismatch unless gen.mode == OneAbove.
CheckReport check_index_policy(const GenConfig& gen, std::uint64_t seed, int instances,
                               double tol);
/// Ascending fstar order must be strictly suboptimal on some instance.
CheckReport check_index_policy_negative_control(const GenConfig& gen, std::uint64_t seed,
                                                int instances, double tol);

/// Two-point instances on {-1, H}: every pair portfolio discovers the high
/// reward with probability exactly 1/(H+1). Throws NotTwoPoint.
CheckReport check_two_point_discovery(const Instance& inst, double tol);
/// Generated two-point instances across the given H values.
CheckReport check_two_point_suite(const std::vector<int>& high_values, std::uint64_t seed,
                                  int instances_per_h, double tol);
CheckReport check_two_point_negative_control(std::uint64_t seed, double tol);

/**
 * The 3-arm counterexample showing dominance does not order continuation
 * values: verifies X2 first-order dominates X3, that every intermediate is
 * finite, that W*(A \ {a2}) < W*(A \ {a3}) strictly, and that the gap
 * exceeds gap_threshold. Throws EpsilonOutOfRange unless 0 < eps < 1/7.
 */
CheckReport check_claim3_counterexample(double epsilon, double gap_threshold = 1e5);
CheckReport check_claim3_negative_control(double epsilon);

/// Closed-form reach probabilities: |above(A)| = 1 instances match the
/// product over below arms, |below(A)| = 1 instances match the complement
/// product, for every ordered policy, within tol (1e-12 grade).
CheckReport check_base_case_q_forms(std::uint64_t seed, int instances, double tol);
CheckReport check_qforms_negative_control(std::uint64_t seed, double tol);

/**
 * Monte-Carlo convergence sandwich on a fixed dominance instance:
 * (T - K(1 + gamma/delta_min)) W*(A) - 3 SE <= mean utility, and
 * |mean/T - W*(A)| <= K(1 + gamma/delta_min) V_max / T + 3 SE/T, plus the
 * empirical exploration-round bound and a zero safety-violation count.
 */
CheckReport check_prop2_convergence(const Instance& inst, std::int64_t T,
                                    std::int64_t episodes, std::uint64_t seed, int threads);
CheckReport check_prop2_negative_control(const Instance& inst, std::int64_t T,
                                         std::int64_t episodes, std::uint64_t seed,
                                         int threads);

/// The fixed K=4 dominance-chain instance (integer supports in [-3, 3]) used
/// by the convergence suite.
Instance convergence_reference_instance();

/// The counterexample instance family (arms a1, a2, a3 as functions of eps).
Instance claim3_instance(double epsilon);

} // namespace safebandit
