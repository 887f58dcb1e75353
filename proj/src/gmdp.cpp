#include "safebandit/gmdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "safebandit/errors.hpp"

namespace safebandit {

double expected_max_gated(const Instance& inst, std::uint32_t arm_mask, std::uint32_t gate_mask) {
    if (arm_mask == 0) return 0.0;
    const int K = inst.arm_count();

    std::vector<double> points;
    for (int a = 1; a <= K; ++a) {
        if (!((arm_mask >> a) & 1u)) continue;
        for (const auto& atom : inst.distribution(a).support()) points.push_back(atom.value);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    // Gate arms outside the max contribute a constant factor Pr(X <= 0).
    double outside = 1.0;
    for (int a = 1; a <= K; ++a)
        if (((gate_mask >> a) & 1u) && !((arm_mask >> a) & 1u))
            outside *= inst.distribution(a).cdf(0.0);

    double e_max = 0.0, e_gated = 0.0;
    double prev_f = 0.0, prev_h = 0.0;
    for (double v : points) {
        double f = 1.0, h = outside;
        for (int a = 1; a <= K; ++a) {
            if (!((arm_mask >> a) & 1u)) continue;
            const DiscreteDistribution& d = inst.distribution(a);
            const double cdf_v = d.cdf(v);
            f *= cdf_v;
            h *= ((gate_mask >> a) & 1u) ? d.cdf(std::min(v, 0.0)) : cdf_v;
        }
        e_max += v * (f - prev_f);
        e_gated += v * (h - prev_h);
        prev_f = f;
        prev_h = h;
    }
    return e_max - e_gated;
}

double expected_terminal_reward(const Instance& inst, StateSet explored) {
    const std::uint32_t all = StateSet::full(inst.arm_count()).mask();
    return expected_max_gated(inst, all, explored.mask());
}

std::vector<ActionChoice> safe_actions(const Instance& inst, StateSet s) {
    std::vector<ActionChoice> out;
    const Partition part = partition(inst, s);
    if (part.above.empty()) return out;
    if (!part.below.empty()) {
        for (int i : part.above.arms())
            for (int j : part.below.arms()) out.push_back(ActionChoice::make_pair(i, j));
    } else {
        for (int i : part.above.arms()) out.push_back(ActionChoice::make_single(i));
    }
    return out;
}

Portfolio action_portfolio(const Instance& inst, const ActionChoice& a) {
    switch (a.kind) {
    case ActionChoice::Kind::Pair: return prior_pair(inst, a.i, a.j);
    case ActionChoice::Kind::Single: return Portfolio::singleton(a.i);
    case ActionChoice::Kind::Stop: break;
    }
    throw std::logic_error("a Stop action has no portfolio");
}

namespace {

// State indices grouped by popcount, ascending, so successors come first.
std::vector<std::uint32_t> states_by_popcount(int K) {
    const std::uint32_t n = std::uint32_t{1} << K;
    std::vector<std::uint32_t> order(n);
    std::vector<std::uint32_t> offset(static_cast<std::size_t>(K) + 2, 0);
    for (std::uint32_t idx = 0; idx < n; ++idx)
        ++offset[static_cast<std::size_t>(__builtin_popcount(idx)) + 1];
    for (std::size_t c = 1; c < offset.size(); ++c) offset[c] += offset[c - 1];
    for (std::uint32_t idx = 0; idx < n; ++idx)
        order[offset[static_cast<std::size_t>(__builtin_popcount(idx))]++] = idx;
    return order;
}

StateSet complement(const Instance& inst, StateSet s) {
    return StateSet::from_mask(inst.full_state().mask() & ~s.mask());
}

struct PairWeights {
    double on_i;
    double on_j;
};

PairWeights pair_weights(const Instance& inst, int i, int j) {
    const double mu_i = inst.mean(i), mu_j = inst.mean(j);
    const double d = mu_i - mu_j;
    return {-mu_j / d, mu_i / d};
}

} // namespace

Solution solve_optimal(const Instance& inst) {
    const int K = inst.arm_count();
    if (K > Instance::kMaxArms)
        throw InstanceTooLarge("instance exceeds the subset-DP arm cap");

    Solution sol{ValueTable(K), PolicyTable(K)};
    for (std::uint32_t idx : states_by_popcount(K)) {
        const StateSet s = StateSet::from_index(idx);
        if (is_terminal(inst, s)) {
            sol.values.at(s) = expected_terminal_reward(inst, complement(inst, s));
            sol.policy.at(s) = ActionChoice::make_stop();
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        ActionChoice best_action{};
        for (const ActionChoice& a : safe_actions(inst, s)) {
            double v;
            if (a.kind == ActionChoice::Kind::Pair) {
                const PairWeights w = pair_weights(inst, a.i, a.j);
                v = w.on_i * sol.values.at(s.without(a.i)) +
                    w.on_j * sol.values.at(s.without(a.j));
            } else {
                v = sol.values.at(s.without(a.i));
            }
            if (v > best) {
                best = v;
                best_action = a;
            }
        }
        sol.values.at(s) = best;
        sol.policy.at(s) = best_action;
    }
    return sol;
}

void require_pvalid(const Instance& inst, const PolicyTable& pol) {
    if (pol.arm_count() != inst.arm_count())
        throw NotPValid("policy table sized for a different instance");
    const std::uint32_t n = std::uint32_t{1} << inst.arm_count();
    for (std::uint32_t idx = 0; idx < n; ++idx) {
        const StateSet s = StateSet::from_index(idx);
        const ActionChoice& a = pol.at(s);
        const Partition part = partition(inst, s);
        if (part.above.empty()) {
            if (a.kind != ActionChoice::Kind::Stop)
                throw NotPValid("terminal states must map to Stop");
        } else if (!part.below.empty()) {
            if (a.kind != ActionChoice::Kind::Pair || !part.above.contains(a.i) ||
                !part.below.contains(a.j))
                throw NotPValid("states with below arms must mix above(s) with below(s)");
        } else {
            if (a.kind != ActionChoice::Kind::Single || !part.above.contains(a.i))
                throw NotPValid("states without below arms must play a single above arm");
        }
    }
}

ValueTable evaluate_policy(const Instance& inst, const PolicyTable& pol) {
    require_pvalid(inst, pol);
    const int K = inst.arm_count();
    ValueTable w(K);
    for (std::uint32_t idx : states_by_popcount(K)) {
        const StateSet s = StateSet::from_index(idx);
        const ActionChoice& a = pol.at(s);
        if (a.kind == ActionChoice::Kind::Stop) {
            w.at(s) = expected_terminal_reward(inst, complement(inst, s));
        } else if (a.kind == ActionChoice::Kind::Pair) {
            const PairWeights pw = pair_weights(inst, a.i, a.j);
            w.at(s) = pw.on_i * w.at(s.without(a.i)) + pw.on_j * w.at(s.without(a.j));
        } else {
            w.at(s) = w.at(s.without(a.i));
        }
    }
    return w;
}

ReachTable reach_table(const Instance& inst, const PolicyTable& pol) {
    require_pvalid(inst, pol);
    const int K = inst.arm_count();
    ReachTable q(K);
    for (std::uint32_t idx : states_by_popcount(K)) {
        const StateSet s = StateSet::from_index(idx);
        const ActionChoice& a = pol.at(s);
        if (a.kind == ActionChoice::Kind::Stop) {
            q.at(s) = s.empty() ? 1.0 : 0.0;
        } else if (a.kind == ActionChoice::Kind::Pair) {
            const PairWeights pw = pair_weights(inst, a.i, a.j);
            q.at(s) = pw.on_i * q.at(s.without(a.i)) + pw.on_j * q.at(s.without(a.j));
        } else {
            q.at(s) = q.at(s.without(a.i));
        }
    }
    return q;
}

double reach_probability_empty(const Instance& inst, const PolicyTable& pol, StateSet s) {
    return reach_table(inst, pol).at(s);
}

ActionChoice ogp_action(const Instance& inst, StateSet s) {
    const Partition part = partition(inst, s);
    if (part.above.empty()) return ActionChoice::make_stop();
    const int i = __builtin_ctz(part.above.mask());
    if (part.below.empty()) return ActionChoice::make_single(i);
    int best_j = 0;
    double best_mu = -std::numeric_limits<double>::infinity();
    for (int j : part.below.arms()) {
        if (inst.mean(j) > best_mu) {
            best_mu = inst.mean(j);
            best_j = j;
        }
    }
    return ActionChoice::make_pair(i, best_j);
}

PolicyTable ogp_policy(const Instance& inst) {
    const int K = inst.arm_count();
    PolicyTable pol(K);
    const std::uint32_t n = std::uint32_t{1} << K;
    for (std::uint32_t idx = 0; idx < n; ++idx) {
        const StateSet s = StateSet::from_index(idx);
        pol.at(s) = ogp_action(inst, s);
    }
    return pol;
}

namespace {

void require_permutation(const std::vector<int>& order, StateSet members, const char* side) {
    if (order.size() != static_cast<std::size_t>(members.count()))
        throw BadPermutation(std::string(side) + " order has the wrong length");
    StateSet seen;
    for (int a : order) {
        if (!members.contains(a))
            throw BadPermutation(std::string(side) + " order lists arm " + std::to_string(a) +
                                 " outside its partition class");
        if (seen.contains(a))
            throw BadPermutation(std::string(side) + " order repeats arm " + std::to_string(a));
        seen = seen.with(a);
    }
}

int first_present(const std::vector<int>& order, StateSet s) {
    for (int a : order)
        if (s.contains(a)) return a;
    return 0;
}

} // namespace

PolicyTable ordered_policy(const Instance& inst, const OrderedPolicySpec& spec) {
    const Partition part = partition(inst, inst.full_state());
    require_permutation(spec.left_order, part.above, "left");
    require_permutation(spec.right_order, part.below, "right");

    const int K = inst.arm_count();
    PolicyTable pol(K);
    const std::uint32_t n = std::uint32_t{1} << K;
    for (std::uint32_t idx = 0; idx < n; ++idx) {
        const StateSet s = StateSet::from_index(idx);
        const Partition ps = partition(inst, s);
        if (ps.above.empty()) {
            pol.at(s) = ActionChoice::make_stop();
        } else if (ps.below.empty()) {
            pol.at(s) = ActionChoice::make_single(first_present(spec.left_order, ps.above));
        } else {
            pol.at(s) = ActionChoice::make_pair(first_present(spec.left_order, ps.above),
                                                first_present(spec.right_order, ps.below));
        }
    }
    return pol;
}

double fstar_index(const Instance& inst, StateSet context, int l) {
    const Partition part = partition(inst, context);
    if (part.above.count() != 1)
        throw WrongAboveCount("the index needs exactly one above arm in the context");
    if (!part.below.contains(l))
        throw WrongAboveCount("arm " + std::to_string(l) + " is not a below arm of the context");
    // The max ranges over the below arms of the context: the exploration
    // order only matters on trajectories where the lone above arm realizes
    // non-positive, so its value never enters the comparison.
    const double numerator =
        expected_max_gated(inst, part.below.mask(), std::uint32_t{1} << l);
    return numerator / std::abs(inst.mean(l));
}

PolicyTable fstar_policy(const Instance& inst, bool ascending) {
    const StateSet all = inst.full_state();
    const Partition part = partition(inst, all);
    if (part.above.count() != 1)
        throw WrongAboveCount("the index policy needs exactly one above arm");
    std::vector<std::pair<double, int>> keyed;
    for (int l : part.below.arms()) keyed.emplace_back(fstar_index(inst, all, l), l);
    std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        return ascending ? a.first < b.first : a.first > b.first;
    });
    std::vector<int> below;
    below.reserve(keyed.size());
    for (const auto& [f, l] : keyed) below.push_back(l);
    return ordered_policy(inst, OrderedPolicySpec{part.above.arms(), below});
}

PolicyTable sample_pvalid_policy(const Instance& inst, Rng& rng) {
    const int K = inst.arm_count();
    PolicyTable pol(K);
    const std::uint32_t n = std::uint32_t{1} << K;
    for (std::uint32_t idx = 0; idx < n; ++idx) {
        const StateSet s = StateSet::from_index(idx);
        const std::vector<ActionChoice> actions = safe_actions(inst, s);
        pol.at(s) = actions.empty()
                        ? ActionChoice::make_stop()
                        : actions[rng.next_below(actions.size())];
    }
    return pol;
}

} // namespace safebandit
