#include "safebandit/episode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "safebandit/errors.hpp"

namespace safebandit {

Realization Realization::draw(const Instance& inst, Rng& rng) {
    Realization r;
    r.x.reserve(static_cast<std::size_t>(inst.arm_count()));
    for (int a = 1; a <= inst.arm_count(); ++a) r.x.push_back(inst.distribution(a).sample(rng));
    return r;
}

namespace {

// SegbPrime consumes above arms by decreasing prior mean; Segb takes the
// lowest index. The below pick is the same greedy rule for both.
ActionChoice phase1_action(const Instance& inst, StateSet s, Variant variant) {
    if (variant == Variant::Segb) return ogp_action(inst, s);
    const Partition part = partition(inst, s);
    if (part.above.empty()) return ActionChoice::make_stop();
    int best_i = 0;
    double best_mu = -std::numeric_limits<double>::infinity();
    for (int i : part.above.arms()) {
        if (inst.mean(i) > best_mu) {
            best_mu = inst.mean(i);
            best_i = i;
        }
    }
    if (part.below.empty()) return ActionChoice::make_single(best_i);
    int best_j = 0;
    double best_mu_j = -std::numeric_limits<double>::infinity();
    for (int j : part.below.arms()) {
        if (inst.mean(j) > best_mu_j) {
            best_mu_j = inst.mean(j);
            best_j = j;
        }
    }
    return ActionChoice::make_pair(best_i, best_j);
}

struct EpisodeState {
    const Instance& inst;
    const Realization& realization;
    std::int64_t T;
    Rng& rng;
    bool record;
    double tol;

    Beliefs beliefs;
    StateSet unexplored;
    std::int64_t t = 1;
    EpisodeResult result;

    EpisodeState(const Instance& i, const Realization& r, std::int64_t horizon, Rng& g,
                 bool rec, double tolerance)
        : inst(i), realization(r), T(horizon), rng(g), record(rec), tol(tolerance),
          beliefs(i), unexplored(i.full_state()) {}

    bool horizon_left() const { return t <= T; }

    // Plays one round; returns the realized arm. r_t is the portfolio's
    // Bayesian expectation, which is also the audited safety margin.
    int play(const Portfolio& p, const char* phase) {
        const double margin = p.expected_value(beliefs);
        if (margin < -tol) ++result.safety_violations;
        const int realized = p.sample_arm(rng);
        std::optional<int> newly;
        if (realized != 0 && !beliefs.is_known(realized)) {
            beliefs.observe(realized, realization.value(realized));
            newly = realized;
            unexplored = unexplored.without(realized);
        }
        result.utility += margin;
        if (record)
            result.rounds.push_back({t, p, realized, newly, margin, margin, phase});
        ++t;
        return realized;
    }

    // Absorbing tail: the same portfolio every remaining round.
    void play_forever(int arm, double per_round, const char* phase, TerminalMode mode) {
        result.exploration_rounds = t - 1;
        result.terminal_mode = mode;
        const std::int64_t remaining = T - t + 1;
        if (remaining <= 0) return;
        if (per_round < -tol) result.safety_violations += remaining;
        result.utility += per_round * static_cast<double>(remaining);
        if (record) {
            const Portfolio p = Portfolio::singleton(arm);
            for (std::int64_t k = 0; k < remaining; ++k, ++t)
                result.rounds.push_back({t, p, arm, std::nullopt, per_round, per_round, phase});
        } else {
            t += remaining;
        }
    }

    void out_of_horizon() {
        result.exploration_rounds = T;
        result.terminal_mode = TerminalMode::HorizonDuringExploration;
    }

    int best_known_arm() const {
        int best = 0;
        double best_x = -std::numeric_limits<double>::infinity();
        for (int a = 1; a <= inst.arm_count(); ++a) {
            if (!beliefs.is_known(a)) continue;
            if (realization.value(a) > best_x) {
                best_x = realization.value(a);
                best = a;
            }
        }
        return best;
    }
};

} // namespace

EpisodeResult run_segb_episode(const Instance& inst, const Realization& realization,
                               std::int64_t T, Rng& rng, Variant variant, bool record_rounds,
                               double tol) {
    if (T < 1) throw HorizonZero("the horizon must be at least one round");
    if (realization.x.size() != static_cast<std::size_t>(inst.arm_count()))
        throw std::invalid_argument("realization does not match the instance");
    for (int a = 1; a <= inst.arm_count(); ++a)
        if (inst.distribution(a).pr_eq(realization.value(a)) == 0.0)
            throw std::invalid_argument("realized value outside the arm's support");

    EpisodeState ep(inst, realization, T, rng, record_rounds, tol);

    // Phase 1: follow the goal-MDP rule until a positive value shows up or
    // no safe exploration remains.
    bool positive_found = false;
    while (!is_terminal(inst, ep.unexplored)) {
        if (!ep.horizon_left()) {
            ep.out_of_horizon();
            return ep.result;
        }
        const ActionChoice a = phase1_action(inst, ep.unexplored, variant);
        const int realized = ep.play(action_portfolio(inst, a), "ogp");
        if (realization.value(realized) > 0.0) {
            positive_found = true;
            break;
        }
    }

    if (!positive_found) {
        ep.play_forever(0, 0.0, "safe", TerminalMode::SafeArmForever);
        return ep.result;
    }

    if (variant == Variant::SegbPrime) {
        const int best = ep.best_known_arm();
        ep.play_forever(best, realization.value(best), "exploit", TerminalMode::ExploitBest);
        return ep.result;
    }

    // Remaining above arms are safe to reveal one by one.
    for (int i : ep.unexplored.intersect(inst.above_mask()).arms()) {
        if (!ep.horizon_left()) {
            ep.out_of_horizon();
            return ep.result;
        }
        ep.play(Portfolio::singleton(i), "above");
    }

    // Bernoulli trials: mix the best known arm with one unexplored arm until
    // everything is revealed. Target the highest-mean unexplored arm first.
    while (!ep.unexplored.empty()) {
        if (!ep.horizon_left()) {
            ep.out_of_horizon();
            return ep.result;
        }
        const int k_star = ep.best_known_arm();
        int target = 0;
        double best_mu = -std::numeric_limits<double>::infinity();
        for (int j : ep.unexplored.arms()) {
            if (inst.mean(j) > best_mu) {
                best_mu = inst.mean(j);
                target = j;
            }
        }
        ep.play(Portfolio::realized_pair(realization.value(k_star), inst.mean(target), k_star,
                                         target),
                "bernoulli");
    }

    const int best = ep.best_known_arm();
    ep.play_forever(best, realization.value(best), "exploit", TerminalMode::ExploitBest);
    return ep.result;
}

DeltaGamma realized_delta_gamma(const Instance& inst, const Realization& realization) {
    DeltaGamma out;
    for (int a = 1; a <= inst.arm_count(); ++a) {
        const double x = realization.value(a);
        if (inst.is_above(a)) {
            if (x > 0.0 && (!out.delta2 || x > *out.delta2)) out.delta2 = x;
        } else {
            out.gamma = std::max(out.gamma, std::abs(inst.mean(a)));
            if (x > 0.0 && (!out.delta1 || x < *out.delta1)) out.delta1 = x;
        }
    }
    if (out.delta1) out.delta = out.delta1;
    if (out.delta2 && (!out.delta || *out.delta2 > *out.delta)) out.delta = out.delta2;
    return out;
}

double convergence_floor(const Instance& inst, double T, double delta_lower, double w_star) {
    if (!(delta_lower > 0.0))
        throw std::invalid_argument("delta_lower must be positive");
    const double cost = inst.arm_count() * (1.0 + below_gamma(inst) / delta_lower);
    if (T <= cost)
        throw BoundVacuous("horizon does not clear the exploration cost K(1 + gamma/delta)");
    return (T - cost) * w_star;
}

} // namespace safebandit
