#include "safebandit/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "safebandit/errors.hpp"
#include "safebandit/gmdp.hpp"
#include "safebandit/monte_carlo.hpp"

namespace safebandit {

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    std::int64_t elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

/// All ordered policies of the instance (every sigma_left x sigma_right),
/// or an empty list when the enumeration budget is exceeded.
std::vector<PolicyTable> enumerate_ordered_policies(const Instance& inst, double cap) {
    const Partition part = partition(inst, inst.full_state());
    if (factorial(part.above.count()) * factorial(part.below.count()) > cap) return {};
    std::vector<PolicyTable> out;
    std::vector<int> left = part.above.arms();
    std::sort(left.begin(), left.end());
    do {
        std::vector<int> right = part.below.arms();
        std::sort(right.begin(), right.end());
        do {
            out.push_back(ordered_policy(inst, OrderedPolicySpec{left, right}));
        } while (std::next_permutation(right.begin(), right.end()));
    } while (std::next_permutation(left.begin(), left.end()));
    return out;
}

std::string describe_state(StateSet s) {
    std::ostringstream os;
    os << "state mask " << s.mask();
    return os.str();
}

CheckReport finish(CheckReport report, const Stopwatch& watch) {
    report.elapsed_ms = watch.elapsed_ms();
    return report;
}

} // namespace

CheckReport check_equivalence_lemma(const GenConfig& gen, std::uint64_t seed, int instances,
                                    int policies_per_instance, double tol) {
    Stopwatch watch;
    CheckReport report{"equivalence_lemma", true, 0.0, "", 0, 0};
    InstanceGenerator generator(gen, seed);
    for (int n = 0; n < instances; ++n) {
        const Instance inst = generator.next();
        std::vector<PolicyTable> policies = enumerate_ordered_policies(inst, 5000.0);
        Rng policy_rng(episode_seed(seed, 0x51u * static_cast<std::uint64_t>(n) + 1));
        for (int p = 0; p < policies_per_instance; ++p)
            policies.push_back(sample_pvalid_policy(inst, policy_rng));

        const std::uint32_t states = std::uint32_t{1} << inst.arm_count();
        std::vector<double> lo(states, std::numeric_limits<double>::infinity());
        std::vector<double> hi(states, -std::numeric_limits<double>::infinity());
        for (const PolicyTable& pol : policies) {
            const ReachTable q = reach_table(inst, pol);
            for (std::uint32_t idx = 0; idx < states; ++idx) {
                const double v = q.at(StateSet::from_index(idx));
                lo[idx] = std::min(lo[idx], v);
                hi[idx] = std::max(hi[idx], v);
            }
            ++report.trials;
        }
        for (std::uint32_t idx = 0; idx < states; ++idx) {
            const double dev = hi[idx] - lo[idx];
            if (dev > report.max_deviation) {
                report.max_deviation = dev;
                std::ostringstream os;
                os << "instance " << n << ", " << describe_state(StateSet::from_index(idx))
                   << ": Q spread " << dev << " across " << policies.size() << " policies";
                report.witness = os.str();
            }
        }
    }
    report.passed = report.max_deviation <= tol;
    return finish(report, watch);
}

CheckReport check_equivalence_negative_control(std::uint64_t seed, double tol) {
    // A policy-shaped recursion that swaps the pair weights at the root
    // state is not P-valid in substance; the lemma check must notice.
    Stopwatch watch;
    GenConfig gen;
    gen.mode = GenMode::Unrestricted;
    gen.min_above = gen.min_below = 2;
    gen.max_above = gen.max_below = 2;
    InstanceGenerator generator(gen, seed);
    double deviation = 0.0;
    std::string witness;
    for (int n = 0; n < 10 && deviation <= tol; ++n) {
        const Instance inst = generator.next();
        const PolicyTable pol = ogp_policy(inst);
        const ReachTable q = reach_table(inst, pol);
        // Corrupted root step: the two transition weights exchanged.
        const StateSet root = inst.full_state();
        const ActionChoice a = pol.at(root);
        const double mu_i = inst.mean(a.i), mu_j = inst.mean(a.j);
        const double d = mu_i - mu_j;
        const double corrupt_root =
            (mu_i / d) * q.at(root.without(a.i)) + (-mu_j / d) * q.at(root.without(a.j));
        deviation = std::abs(corrupt_root - q.at(root));
        witness = "instance " + std::to_string(n) + ": corrupted-root Q deviates by " +
                  std::to_string(deviation);
    }
    return finish({"equivalence_lemma_negative_control", deviation > tol, deviation, witness,
                   10, 0},
                  watch);
}

CheckReport check_ogp_optimality(const GenConfig& gen, std::uint64_t seed, int instances,
                                 double tol) {
    if (gen.mode != GenMode::DominanceChain)
        throw GeneratorModeMismatch("the optimality check needs DominanceChain instances");
    Stopwatch watch;
    CheckReport report{"ogp_optimality", true, 0.0, "", 0, 0};
    InstanceGenerator generator(gen, seed);
    for (int n = 0; n < instances; ++n) {
        const Instance inst = generator.next();
        const Solution sol = solve_optimal(inst);
        const ValueTable w_ogp = evaluate_policy(inst, ogp_policy(inst));
        const std::uint32_t states = std::uint32_t{1} << inst.arm_count();
        for (std::uint32_t idx = 0; idx < states; ++idx) {
            const StateSet s = StateSet::from_index(idx);
            const double dev = std::abs(w_ogp.at(s) - sol.values.at(s));
            if (dev > report.max_deviation) {
                report.max_deviation = dev;
                report.witness = "instance " + std::to_string(n) + ", " + describe_state(s);
            }
        }
        ++report.trials;
    }
    report.passed = report.max_deviation <= tol;
    return finish(report, watch);
}

CheckReport check_ogp_negative_control(double tol) {
    // Reversing the below order (ascending mean) on the counterexample
    // family must cost a macroscopic amount.
    Stopwatch watch;
    const Instance inst = claim3_instance(0.1);
    const Solution sol = solve_optimal(inst);
    const PolicyTable reversed = ordered_policy(inst, OrderedPolicySpec{{1}, {3, 2}});
    const ValueTable w = evaluate_policy(inst, reversed);
    double deviation = 0.0;
    StateSet worst;
    const std::uint32_t states = std::uint32_t{1} << inst.arm_count();
    for (std::uint32_t idx = 0; idx < states; ++idx) {
        const StateSet s = StateSet::from_index(idx);
        const double dev = std::abs(w.at(s) - sol.values.at(s));
        if (dev > deviation) {
            deviation = dev;
            worst = s;
        }
    }
    return finish({"ogp_optimality_negative_control", deviation > tol, deviation,
                   "reversed below order loses " + std::to_string(deviation) + " at " +
                       describe_state(worst),
                   1, 0},
                  watch);
}

CheckReport check_index_policy(const GenConfig& gen, std::uint64_t seed, int instances,
                               double tol) {
    if (gen.mode != GenMode::OneAbove)
        throw GeneratorModeMismatch("the index-policy check needs OneAbove instances");
    Stopwatch watch;
    CheckReport report{"fstar_index_policy", true, 0.0, "", 0, 0};
    InstanceGenerator generator(gen, seed);
    for (int n = 0; n < instances; ++n) {
        const Instance inst = generator.next();
        const Solution sol = solve_optimal(inst);
        const ValueTable w = evaluate_policy(inst, fstar_policy(inst));
        const StateSet a = inst.full_state();
        const double dev = std::abs(w.at(a) - sol.values.at(a));
        if (dev > report.max_deviation) {
            report.max_deviation = dev;
            report.witness = "instance " + std::to_string(n);
        }
        ++report.trials;
    }
    report.passed = report.max_deviation <= tol;
    return finish(report, watch);
}

CheckReport check_index_policy_negative_control(const GenConfig& gen, std::uint64_t seed,
                                                int instances, double tol) {
    if (gen.mode != GenMode::OneAbove)
        throw GeneratorModeMismatch("the index-policy check needs OneAbove instances");
    Stopwatch watch;
    InstanceGenerator generator(gen, seed);
    double deviation = 0.0;
    std::string witness = "ascending order never lost";
    for (int n = 0; n < instances; ++n) {
        const Instance inst = generator.next();
        const Solution sol = solve_optimal(inst);
        const ValueTable w = evaluate_policy(inst, fstar_policy(inst, /*ascending=*/true));
        const StateSet a = inst.full_state();
        const double dev = std::abs(w.at(a) - sol.values.at(a));
        if (dev > deviation) {
            deviation = dev;
            witness = "instance " + std::to_string(n) + ": ascending order loses " +
                      std::to_string(dev);
        }
    }
    return finish({"fstar_index_negative_control", deviation > tol, deviation, witness,
                   instances, 0},
                  watch);
}

namespace {

// The shared support {-1, H} of a two-point instance. Throws NotTwoPoint.
int two_point_high(const Instance& inst) {
    double high = 0.0;
    bool have_high = false;
    for (int a = 1; a <= inst.arm_count(); ++a) {
        for (const auto& atom : inst.distribution(a).support()) {
            if (atom.value == -1.0) continue;
            if (!(atom.value > 0.0))
                throw NotTwoPoint("support value outside {-1, H}");
            if (have_high && atom.value != high)
                throw NotTwoPoint("arms do not share one high value");
            high = atom.value;
            have_high = true;
        }
    }
    if (!have_high) throw NotTwoPoint("no positive support value present");
    if (high != std::floor(high))
        throw NotTwoPoint("the shared high value must be an integer");
    return static_cast<int>(high);
}

} // namespace

CheckReport check_two_point_discovery(const Instance& inst, double tol) {
    Stopwatch watch;
    const int high = two_point_high(inst);
    const double expected = 1.0 / (high + 1.0);
    CheckReport report{"two_point_discovery", true, 0.0, "", 0, 0};
    const Partition part = partition(inst, inst.full_state());
    for (int i : part.above.arms()) {
        for (int j : part.below.arms()) {
            const Portfolio p = prior_pair(inst, i, j);
            const double discover =
                p.weight(i) * inst.distribution(i).pr_eq(high) +
                p.weight(j) * inst.distribution(j).pr_eq(high);
            const double dev = std::abs(discover - expected);
            if (dev > report.max_deviation) {
                report.max_deviation = dev;
                report.witness = "pair (" + std::to_string(i) + "," + std::to_string(j) +
                                 "), H = " + std::to_string(high);
            }
            ++report.trials;
        }
    }
    report.passed = report.max_deviation <= tol;
    return finish(report, watch);
}

CheckReport check_two_point_suite(const std::vector<int>& high_values, std::uint64_t seed,
                                  int instances_per_h, double tol) {
    Stopwatch watch;
    CheckReport report{"two_point_discovery", true, 0.0, "", 0, 0};
    for (int h : high_values) {
        GenConfig gen;
        gen.mode = GenMode::TwoPoint;
        gen.two_point_high = h;
        InstanceGenerator generator(gen, seed + static_cast<std::uint64_t>(h));
        for (int n = 0; n < instances_per_h; ++n) {
            const CheckReport one = check_two_point_discovery(generator.next(), tol);
            report.trials += one.trials;
            if (one.max_deviation > report.max_deviation) {
                report.max_deviation = one.max_deviation;
                report.witness = "H = " + std::to_string(h) + ", " + one.witness;
            }
        }
    }
    report.passed = report.max_deviation <= tol;
    return finish(report, watch);
}

CheckReport check_two_point_negative_control(std::uint64_t seed, double tol) {
    // Swapped mixing weights must break the 1/(H+1) identity on some
    // asymmetric instance.
    Stopwatch watch;
    GenConfig gen;
    gen.mode = GenMode::TwoPoint;
    gen.two_point_high = 3;
    InstanceGenerator generator(gen, seed);
    double deviation = 0.0;
    for (int n = 0; n < 10; ++n) {
        const Instance inst = generator.next();
        const int high = two_point_high(inst);
        const Partition part = partition(inst, inst.full_state());
        for (int i : part.above.arms()) {
            for (int j : part.below.arms()) {
                const Portfolio p = prior_pair(inst, i, j);
                const double corrupted =
                    p.weight(j) * inst.distribution(i).pr_eq(high) +
                    p.weight(i) * inst.distribution(j).pr_eq(high);
                deviation = std::max(deviation,
                                     std::abs(corrupted - 1.0 / (high + 1.0)));
            }
        }
    }
    return finish({"two_point_negative_control", deviation > tol, deviation,
                   "swapped weights deviate by " + std::to_string(deviation), 10, 0},
                  watch);
}

Instance claim3_instance(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0 / 7.0))
        throw EpsilonOutOfRange("epsilon must lie in (0, 1/7)");
    std::vector<DiscreteDistribution> arms;
    arms.push_back(DiscreteDistribution({{-1.0, 0.45}, {1.0, 0.55}}));
    arms.push_back(DiscreteDistribution({{-1e6 - 2.0 * epsilon, 0.5}, {1e6, 0.5}}));
    arms.push_back(DiscreteDistribution({{-std::pow(10.0, 1.0 / epsilon), 0.5}, {1e6, 0.5}}));
    return Instance::validate(std::move(arms));
}

CheckReport check_claim3_counterexample(double epsilon, double gap_threshold) {
    Stopwatch watch;
    const Instance inst = claim3_instance(epsilon);

    const bool dominance = stochastically_dominates(inst.distribution(2), inst.distribution(3));
    const Solution sol = solve_optimal(inst);

    bool all_finite = true;
    const std::uint32_t states = std::uint32_t{1} << inst.arm_count();
    for (std::uint32_t idx = 0; idx < states; ++idx)
        all_finite = all_finite && std::isfinite(sol.values.at(StateSet::from_index(idx)));

    const StateSet full = inst.full_state();
    const double w_without_a2 = sol.values.at(full.without(2));
    const double w_without_a3 = sol.values.at(full.without(3));
    const double gap = w_without_a3 - w_without_a2;
    const bool strict = w_without_a2 < w_without_a3;

    std::ostringstream os;
    os << "dominance=" << (dominance ? "yes" : "no") << ", W*(A\\{a2})=" << w_without_a2
       << ", W*(A\\{a3})=" << w_without_a3 << ", gap=" << gap << " (threshold "
       << gap_threshold << "), finite=" << (all_finite ? "yes" : "no");

    CheckReport report{"claim3_counterexample",
                       dominance && all_finite && strict && gap > gap_threshold, gap, os.str(),
                       1, 0};
    return finish(report, watch);
}

CheckReport check_claim3_negative_control(double epsilon) {
    // With the arms swapped the dominance premise must be rejected.
    Stopwatch watch;
    const Instance inst = claim3_instance(epsilon);
    const bool detected = !stochastically_dominates(inst.distribution(3), inst.distribution(2));
    return finish({"claim3_negative_control", detected, detected ? 1.0 : 0.0,
                   "reversed dominance premise rejected", 1, 0},
                  watch);
}

namespace {

// One above arm i: every trial explores its target below arm j with
// probability mt_i / (mt_i + mt_j) and otherwise ends the process, so the
// reach probability is the product of the per-trial success weights.
double product_q_one_above(const Instance& inst, StateSet s, int above_arm) {
    const double mt_i = inst.mean(above_arm);
    double q = 1.0;
    for (int j : s.intersect(inst.below_mask()).arms())
        q *= mt_i / (mt_i + std::abs(inst.mean(j)));
    return q;
}

// One below arm j: exploration fails only if every above arm is realized
// first, each with the per-trial weight mt_j / (mt_i + mt_j).
double product_q_one_below(const Instance& inst, StateSet s, int below_arm) {
    const double mt_j = std::abs(inst.mean(below_arm));
    double fail = 1.0;
    for (int i : s.intersect(inst.above_mask()).arms()) fail *= mt_j / (inst.mean(i) + mt_j);
    return 1.0 - fail;
}

} // namespace

CheckReport check_base_case_q_forms(std::uint64_t seed, int instances, double tol) {
    Stopwatch watch;
    CheckReport report{"base_case_q_forms", true, 0.0, "", 0, 0};

    GenConfig one_above;
    one_above.mode = GenMode::OneAbove;
    one_above.max_below = 5;
    GenConfig one_below;
    one_below.mode = GenMode::Unrestricted;
    one_below.min_above = 2;
    one_below.max_above = 5;
    one_below.min_below = 1;
    one_below.max_below = 1;

    InstanceGenerator gen_above(one_above, seed);
    InstanceGenerator gen_below(one_below, seed ^ 0xabcdef12345678ULL);

    for (int n = 0; n < instances; ++n) {
        const bool above_case = (n % 2 == 0);
        const Instance inst = above_case ? gen_above.next() : gen_below.next();
        const Partition part = partition(inst, inst.full_state());
        const int pivot = above_case ? part.above.arms().front() : part.below.arms().front();

        for (const PolicyTable& pol : enumerate_ordered_policies(inst, 5000.0)) {
            const ReachTable q = reach_table(inst, pol);
            const std::uint32_t states = std::uint32_t{1} << inst.arm_count();
            for (std::uint32_t idx = 0; idx < states; ++idx) {
                const StateSet s = StateSet::from_index(idx);
                if (!s.contains(pivot)) continue; // closed forms need the pivot alive
                if (is_terminal(inst, s)) continue;
                const double expected = above_case ? product_q_one_above(inst, s, pivot)
                                                   : product_q_one_below(inst, s, pivot);
                const double dev = std::abs(q.at(s) - expected);
                if (dev > report.max_deviation) {
                    report.max_deviation = dev;
                    report.witness = "instance " + std::to_string(n) + " (" +
                                     (above_case ? "one-above" : "one-below") + "), " +
                                     describe_state(s);
                }
            }
            ++report.trials;
        }
    }
    report.passed = report.max_deviation <= tol;
    return finish(report, watch);
}

CheckReport check_qforms_negative_control(std::uint64_t seed, double tol) {
    // The product with swapped numerators (each below magnitude over the
    // same denominator) must disagree on an instance with asymmetric
    // magnitudes.
    Stopwatch watch;
    GenConfig gen;
    gen.mode = GenMode::OneAbove;
    gen.max_below = 3;
    InstanceGenerator generator(gen, seed);
    double deviation = 0.0;
    for (int n = 0; n < 10 && deviation <= tol; ++n) {
        const Instance inst = generator.next();
        const PolicyTable pol = ogp_policy(inst);
        const StateSet full = inst.full_state();
        const double q = reach_probability_empty(inst, pol, full);
        const int above_arm = partition(inst, full).above.arms().front();
        double wrong = 1.0;
        for (int j : full.intersect(inst.below_mask()).arms()) {
            const double mt_j = std::abs(inst.mean(j));
            wrong *= mt_j / (mt_j + inst.mean(above_arm));
        }
        deviation = std::abs(q - wrong);
    }
    return finish({"qforms_negative_control", deviation > tol, deviation,
                   "swapped-numerator closed form deviates by " + std::to_string(deviation),
                   10, 0},
                  watch);
}

Instance convergence_reference_instance() {
    std::vector<DiscreteDistribution> arms;
    arms.push_back(DiscreteDistribution({{-1.0, 0.25}, {3.0, 0.75}})); // mean  2
    arms.push_back(DiscreteDistribution({{-2.0, 0.25}, {2.0, 0.75}})); // mean  1
    arms.push_back(DiscreteDistribution({{-3.0, 0.50}, {1.0, 0.50}})); // mean -1
    arms.push_back(DiscreteDistribution({{-3.0, 0.75}, {1.0, 0.25}})); // mean -2
    return Instance::validate(std::move(arms));
}

namespace {

struct SandwichOutcome {
    double shortfall = 0.0; // how far outside the bounds, 0 when inside
    std::string detail;
};

SandwichOutcome convergence_sandwich(const Instance& inst, std::int64_t T,
                                     const McResult& mc, double w_star) {
    const double gamma = below_gamma(inst);
    const double delta_min = smallest_positive_support(inst);
    const double v_max = largest_support(inst);
    const double bound_rounds = inst.arm_count() * (1.0 + gamma / delta_min);

    const double floor = (static_cast<double>(T) - bound_rounds) * w_star;
    const double floor_shortfall = std::max(0.0, floor - 3.0 * mc.std_error - mc.mean_utility);

    const double per_round_gap = std::abs(mc.mean_utility / static_cast<double>(T) - w_star);
    const double ceiling = bound_rounds * v_max / static_cast<double>(T) +
                           3.0 * mc.std_error / static_cast<double>(T);
    const double ceiling_shortfall = std::max(0.0, per_round_gap - ceiling);

    const double expl_shortfall = std::max(0.0, mc.mean_exploration_rounds - bound_rounds);

    SandwichOutcome out;
    out.shortfall = std::max({floor_shortfall, ceiling_shortfall, expl_shortfall});
    std::ostringstream os;
    os << "mean=" << mc.mean_utility << " se=" << mc.std_error << " floor=" << floor
       << " |mean/T - W*|=" << per_round_gap << " ceiling=" << ceiling
       << " expl=" << mc.mean_exploration_rounds << " bound=" << bound_rounds
       << " violations=" << mc.safety_violations;
    out.detail = os.str();
    return out;
}

} // namespace

CheckReport check_prop2_convergence(const Instance& inst, std::int64_t T,
                                    std::int64_t episodes, std::uint64_t seed, int threads) {
    Stopwatch watch;
    const Solution sol = solve_optimal(inst);
    const double w_star = sol.values.at(inst.full_state());
    const McResult mc = monte_carlo_utility(inst, T, episodes, seed, Variant::Segb, threads);
    const SandwichOutcome outcome = convergence_sandwich(inst, T, mc, w_star);
    const bool passed = outcome.shortfall == 0.0 && mc.safety_violations == 0;
    return finish({"prop2_convergence", passed, outcome.shortfall, outcome.detail, episodes, 0},
                  watch);
}

CheckReport check_prop2_negative_control(const Instance& inst, std::int64_t T,
                                         std::int64_t episodes, std::uint64_t seed,
                                         int threads) {
    // Inflating W* by 50% must break the sandwich: the bounds are not
    // vacuous at this scale.
    Stopwatch watch;
    const Solution sol = solve_optimal(inst);
    const double w_star = sol.values.at(inst.full_state());
    const McResult mc = monte_carlo_utility(inst, T, episodes, seed, Variant::Segb, threads);
    const SandwichOutcome outcome = convergence_sandwich(inst, T, mc, 1.5 * w_star);
    return finish({"prop2_negative_control", outcome.shortfall > 0.0, outcome.shortfall,
                   "inflated W* breaks the sandwich: " + outcome.detail, episodes, 0},
                  watch);
}

} // namespace safebandit
