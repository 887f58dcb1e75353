#pragma once

#include <cstdint>
#include <vector>

#include "safebandit/instance.hpp"
#include "safebandit/portfolio.hpp"
#include "safebandit/state.hpp"

namespace safebandit {

/**
 * One policy decision at a state: mix an above arm with a below arm (Pair),
 * play an above arm deterministically (Single, only legal when no below arm
 * remains), or Stop at a terminal state.
 */
struct ActionChoice {
    enum class Kind { Pair, Single, Stop };

    Kind kind = Kind::Stop;
    int i = 0; // above arm (Pair/Single)
    int j = 0; // below arm (Pair)

    static ActionChoice make_pair(int i, int j) { return {Kind::Pair, i, j}; }
    static ActionChoice make_single(int i) { return {Kind::Single, i, 0}; }
    static ActionChoice make_stop() { return {Kind::Stop, 0, 0}; }

    bool operator==(const ActionChoice& o) const {
        return kind == o.kind && i == o.i && j == o.j;
    }
};

/// Dense per-state table of doubles, indexed by StateSet::index().
class DenseTable {
public:
    explicit DenseTable(int arm_count)
        : arm_count_(arm_count), data_(std::size_t{1} << arm_count, 0.0) {}

    double& at(StateSet s) { return data_[s.index()]; }
    double at(StateSet s) const { return data_[s.index()]; }
    int arm_count() const { return arm_count_; }
    std::size_t size() const { return data_.size(); }

private:
    int arm_count_;
    std::vector<double> data_;
};

using ValueTable = DenseTable; // W(pi, s) / W*(s)
using ReachTable = DenseTable; // Q(pi, s), the probability of exploring everything

/// A stationary policy: one ActionChoice for every state of the instance.
class PolicyTable {
public:
    explicit PolicyTable(int arm_count)
        : arm_count_(arm_count), actions_(std::size_t{1} << arm_count) {}

    ActionChoice& at(StateSet s) { return actions_[s.index()]; }
    const ActionChoice& at(StateSet s) const { return actions_[s.index()]; }
    int arm_count() const { return arm_count_; }

private:
    int arm_count_;
    std::vector<ActionChoice> actions_;
};

/// Permutations of above(A) and below(A) fixing the exploration priority of
/// an ordered policy (first listed = first consumed).
struct OrderedPolicySpec {
    std::vector<int> left_order;  // permutation of above(A)
    std::vector<int> right_order; // permutation of below(A)
};

/// A state is terminal iff no positive-mean arm remains (covers s = {}).
inline bool is_terminal(const Instance& inst, StateSet s) {
    return (s.mask() & inst.above_mask()) == 0;
}

/**
 * E[ max_{a in arm_mask} X(a) * 1{ exists a in gate_mask with X(a) > 0 } ]
 * over independent arms, as E[M] - E[M * 1{all gate arms <= 0}]; both terms
 * are sums over the union of support values with per-arm CDF products.
 */
double expected_max_gated(const Instance& inst, std::uint32_t arm_mask, std::uint32_t gate_mask);

/**
 * Expected terminal reward R for the given explored set: the expectation of
 * the maximum over all K arms, gated on some explored arm being positive.
 * The value of a terminal state s is expected_terminal_reward(A \ s).
 */
double expected_terminal_reward(const Instance& inst, StateSet explored);

/**
 * Legal decisions at s: every Pair(i, j) with i in above(s), j in below(s);
 * when below(s) is empty, every Single(i). Empty exactly at terminal states.
 * Enumerated in canonical order (i ascending, then j ascending).
 */
std::vector<ActionChoice> safe_actions(const Instance& inst, StateSet s);

/// The (prior-mean) portfolio realizing an ActionChoice.
Portfolio action_portfolio(const Instance& inst, const ActionChoice& a);

struct Solution {
    ValueTable values;  // W*
    PolicyTable policy; // an argmax policy, ties broken toward the first
                        // action in safe_actions order
};

/**
 * Exact bottom-up subset dynamic programming for W*. States are processed in
 * increasing popcount order so every successor is already solved. Throws
 * InstanceTooLarge for K > Instance::kMaxArms.
 */
Solution solve_optimal(const Instance& inst);

/// Checks the P-validity invariants of a policy table; throws NotPValid.
void require_pvalid(const Instance& inst, const PolicyTable& pol);

/// W(pi, s) for every state, by the same backward recursion with the
/// policy's fixed action. Throws NotPValid.
ValueTable evaluate_policy(const Instance& inst, const PolicyTable& pol);

/// Q(pi, s) for every state: probability of reaching the empty state.
/// q({}) = 1, q(terminal != {}) = 0. Throws NotPValid.
ReachTable reach_table(const Instance& inst, const PolicyTable& pol);
double reach_probability_empty(const Instance& inst, const PolicyTable& pol, StateSet s);

/**
 * The optimal goal-MDP policy rule: at a non-terminal state pick the
 * lowest-index above arm and mix it with the highest-mean below arm
 * (lowest index on ties); play the above arm alone when no below arm
 * remains.
 */
ActionChoice ogp_action(const Instance& inst, StateSet s);
PolicyTable ogp_policy(const Instance& inst);

/// Ordered policy: consume above/below arms in the spec's fixed priority
/// orders, defined at off-path states too. Throws BadPermutation.
PolicyTable ordered_policy(const Instance& inst, const OrderedPolicySpec& spec);

/**
 * Index of below arm l in a context state with exactly one above arm:
 * Pr(X_l > 0) * E[max over context arms | X_l > 0] / |mu_l|.
 * Ordering below arms by descending index yields an optimal policy.
 * Throws WrongAboveCount.
 */
double fstar_index(const Instance& inst, StateSet context, int l);

/// Right-ordered policy sorting below(A) by descending fstar_index
/// (ascending when `ascending` is set, the deliberately wrong order).
PolicyTable fstar_policy(const Instance& inst, bool ascending = false);

/// Uniformly random legal action at every non-terminal state.
PolicyTable sample_pvalid_policy(const Instance& inst, Rng& rng);

} // namespace safebandit
