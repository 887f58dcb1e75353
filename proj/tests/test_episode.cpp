#include <doctest.h>

#include <cmath>
#include <string>

#include "safebandit/episode.hpp"
#include "safebandit/errors.hpp"
#include "safebandit/generator.hpp"
#include "safebandit/gmdp.hpp"

using namespace safebandit;

namespace {

Instance example_normals() {
    return Instance::from_json_file(std::string(SAFEBANDIT_INSTANCE_DIR) +
                                    "/example_normals.json");
}

} // namespace

TEST_CASE("horizon validation") {
    const Instance inst = Instance::from_json_text(
        R"({"arms": [{"support": [[-1, 0.5], [3, 0.5]]}]})");
    Rng rng(1);
    const Realization r = Realization::draw(inst, rng);
    CHECK_THROWS_AS(run_segb_episode(inst, r, 0, rng, Variant::Segb), HorizonZero);
}

TEST_CASE("no safe exploration: the safe arm forever") {
    const Instance inst = Instance::from_json_text(
        R"({"arms": [{"support": [[-2, 0.5], [1, 0.5]]}, {"support": [[-1, 1.0]]}]})");
    Rng rng(4);
    const Realization r = Realization::draw(inst, rng);
    const EpisodeResult res = run_segb_episode(inst, r, 25, rng, Variant::Segb);
    CHECK(res.terminal_mode == TerminalMode::SafeArmForever);
    CHECK(res.exploration_rounds == 0);
    CHECK(res.utility == 0.0);
    CHECK(res.safety_violations == 0);
    REQUIRE(res.rounds.size() == 25);
    for (const RoundLog& round : res.rounds) {
        CHECK(round.realized_arm == 0);
        CHECK(round.reward == 0.0);
        CHECK(std::string(round.phase) == "safe");
    }
}

// Hand-traced golden episode: with seed 320 the four realizations of the
// discretized-normal instance are (-0.5, -2, -1, -3), all negative. The walk
// is pair(1,3) -> arm 3, pair(1,4) -> arm 4, single(1) with r = 2,
// single(2) with r = 1, then the safe arm forever. Utility 3.
TEST_CASE("golden trace: all realizations negative") {
    const Instance inst = example_normals();
    Rng rng(320);
    const Realization r = Realization::draw(inst, rng);
    REQUIRE(r.x == std::vector<double>{-0.5, -2.0, -1.0, -3.0});

    const EpisodeResult res = run_segb_episode(inst, r, 10, rng, Variant::Segb);
    CHECK(res.terminal_mode == TerminalMode::SafeArmForever);
    CHECK(res.exploration_rounds == 4);
    CHECK(res.utility == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(res.safety_violations == 0);
    REQUIRE(res.rounds.size() == 10);

    CHECK(res.rounds[0].portfolio.weight(1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(res.rounds[0].portfolio.weight(3) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(res.rounds[0].realized_arm == 3);
    CHECK(res.rounds[0].reward == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(res.rounds[1].portfolio.weight(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(res.rounds[1].portfolio.weight(4) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(res.rounds[1].realized_arm == 4);

    CHECK(res.rounds[2].portfolio.weight(1) == 1.0);
    CHECK(res.rounds[2].realized_arm == 1);
    CHECK(res.rounds[2].reward == doctest::Approx(2.0).epsilon(1e-12));

    CHECK(res.rounds[3].portfolio.weight(2) == 1.0);
    CHECK(res.rounds[3].reward == doctest::Approx(1.0).epsilon(1e-12));

    for (int t = 4; t < 10; ++t) {
        CHECK(res.rounds[t].realized_arm == 0);
        CHECK(res.rounds[t].reward == 0.0);
    }

    // every phase-1 portfolio is the greedy rule's portfolio for the state
    StateSet s = inst.full_state();
    for (const RoundLog& round : res.rounds) {
        if (std::string(round.phase) != "ogp") break;
        const ActionChoice a = ogp_action(inst, s);
        const Portfolio expect = action_portfolio(inst, a);
        CHECK(round.portfolio.entries() == expect.entries());
        if (round.newly_explored) s = s.without(*round.newly_explored);
    }
}

// Seed 3's first coin lands below 1/3, so the pair portfolio realizes the
// above arm, whose value is positive: the two-point variant exploits from
// round 2 on and collects (T-1) * H.
TEST_CASE("golden trace: two-point variant exploits immediately") {
    const Instance inst = Instance::from_json_text(
        R"({"arms": [{"support": [[-1, 0.5], [3, 0.5]]},
                     {"support": [[-1, 0.875], [3, 0.125]]}]})");
    Realization r;
    r.x = {3.0, -1.0};
    Rng rng(3);
    const EpisodeResult res = run_segb_episode(inst, r, 10, rng, Variant::SegbPrime);
    CHECK(res.terminal_mode == TerminalMode::ExploitBest);
    CHECK(res.exploration_rounds == 1);
    REQUIRE(res.rounds.size() == 10);
    CHECK(res.rounds[0].realized_arm == 1);
    CHECK(res.rounds[0].reward == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(res.utility == doctest::Approx(9.0 * 3.0).epsilon(1e-12));
    for (int t = 1; t < 10; ++t) {
        CHECK(res.rounds[t].realized_arm == 1);
        CHECK(res.rounds[t].reward == 3.0);
    }
}

TEST_CASE("full pipeline: above sweep, bernoulli trials, exploitation") {
    const Instance inst = Instance::from_json_text(
        R"({"arms": [{"support": [[-1, 0.5], [2, 0.5]]},
                     {"support": [[1, 1.0]]},
                     {"support": [[-2, 0.75], [2, 0.25]]}]})");
    Realization r;
    r.x = {2.0, 1.0, 2.0};
    Rng rng(11);
    const std::int64_t T = 60;
    const EpisodeResult res = run_segb_episode(inst, r, T, rng, Variant::Segb);

    CHECK(res.terminal_mode == TerminalMode::ExploitBest);
    CHECK(res.safety_violations == 0);

    // phases appear in order, and each round respects its contract
    Beliefs beliefs(inst);
    int last_phase = 0;
    const auto phase_rank = [](const std::string& p) {
        if (p == "ogp") return 0;
        if (p == "above") return 1;
        if (p == "bernoulli") return 2;
        return 3;
    };
    for (const RoundLog& round : res.rounds) {
        const std::string phase = round.phase;
        CHECK(phase_rank(phase) >= last_phase);
        last_phase = phase_rank(phase);
        CHECK(round.safety_margin >= -1e-9);
        if (phase == "bernoulli") {
            // the success weight on the target arm is x / (x - mu_target)
            int target = 0, best = 0;
            for (const auto& [arm, w] : round.portfolio.entries())
                (inst.mean(arm) < 0 && !beliefs.is_known(arm)) ? target = arm : best = arm;
            REQUIRE(target != 0);
            REQUIRE(best != 0);
            const double x_best = r.x[best - 1];
            CHECK(round.portfolio.weight(target) ==
                  doctest::Approx(x_best / (x_best - inst.mean(target))).epsilon(1e-14));
        }
        if (phase == "exploit") {
            CHECK(round.reward == 2.0); // best realized value, lowest index on ties
            CHECK(round.realized_arm == 1);
        }
        if (round.newly_explored)
            beliefs.observe(*round.newly_explored, r.x[*round.newly_explored - 1]);
    }

    // utility equals the sum of the logged rewards
    double total = 0.0;
    for (const RoundLog& round : res.rounds) total += round.reward;
    CHECK(std::abs(total - res.utility) <= 1e-9 * static_cast<double>(T));
}

TEST_CASE("horizon can end during exploration") {
    const Instance inst = example_normals();
    Rng rng(320);
    const Realization r = Realization::draw(inst, rng); // all negative, needs 4 rounds
    const EpisodeResult res = run_segb_episode(inst, r, 2, rng, Variant::Segb);
    CHECK(res.terminal_mode == TerminalMode::HorizonDuringExploration);
    CHECK(res.exploration_rounds == 2);
    CHECK(res.rounds.size() == 2);
}

TEST_CASE("static rewards: known values never change") {
    GenConfig gen;
    gen.mode = GenMode::Unrestricted;
    InstanceGenerator g(gen, 300);
    for (int n = 0; n < 10; ++n) {
        const Instance inst = g.next();
        Rng rng(episode_seed(55, static_cast<std::uint64_t>(n)));
        const Realization r = Realization::draw(inst, rng);
        const EpisodeResult res = run_segb_episode(inst, r, 40, rng, Variant::Segb);
        CHECK(res.safety_violations == 0);
        // each arm explored at most once
        std::vector<int> seen(static_cast<std::size_t>(inst.arm_count()) + 1, 0);
        for (const RoundLog& round : res.rounds)
            if (round.newly_explored) seen[static_cast<std::size_t>(*round.newly_explored)]++;
        for (int count : seen) CHECK(count <= 1);
    }
}

TEST_CASE("delta and gamma quantities") {
    const Instance inst = Instance::from_json_text(
        R"({"arms": [{"support": [[-1, 0.25], [1.5, 0.75]]},
                     {"support": [[-3, 0.5], [0.5, 0.5]]},
                     {"support": [[-4, 0.5], [0.5, 0.5]]}]})");
    // means: 0.875 (above), -1.25, -1.75 -> gamma = 1.75
    Realization r;
    r.x = {1.5, 0.5, -4.0};
    const DeltaGamma dg = realized_delta_gamma(inst, r);
    CHECK(dg.gamma == doctest::Approx(1.75).epsilon(1e-15));
    REQUIRE(dg.delta1.has_value());
    CHECK(*dg.delta1 == 0.5);
    REQUIRE(dg.delta2.has_value());
    CHECK(*dg.delta2 == 1.5);
    REQUIRE(dg.delta.has_value());
    CHECK(*dg.delta == 1.5);

    Realization all_neg;
    all_neg.x = {-1.0, -3.0, -4.0};
    const DeltaGamma dg2 = realized_delta_gamma(inst, all_neg);
    CHECK_FALSE(dg2.delta.has_value());
    CHECK_FALSE(dg2.delta1.has_value());
    CHECK_FALSE(dg2.delta2.has_value());
    CHECK(dg2.gamma == doctest::Approx(1.75));

    // gamma of a below-free instance is 0
    const Instance above_only =
        Instance::from_json_text(R"({"arms": [{"support": [[2, 1.0]]}]})");
    Realization ra;
    ra.x = {2.0};
    CHECK(realized_delta_gamma(above_only, ra).gamma == 0.0);
}

TEST_CASE("convergence floor") {
    // K = 4, gamma = 2, delta = 1: T - K(1 + gamma/delta) = 100 - 12
    const Instance inst = Instance::from_json_text(
        R"({"arms": [{"support": [[1, 1.0]]}, {"support": [[2, 1.0]]},
                     {"support": [[-1, 1.0]]}, {"support": [[-2, 1.0]]}]})");
    CHECK(convergence_floor(inst, 100.0, 1.0, 1.0) == doctest::Approx(88.0).epsilon(1e-15));
    CHECK_THROWS_AS(convergence_floor(inst, 12.0, 1.0, 1.0), BoundVacuous);
    CHECK_THROWS_AS(convergence_floor(inst, 100.0, 0.0, 1.0), std::invalid_argument);

    // floor / T approaches w_star
    const double w_star = 2.5;
    CHECK(convergence_floor(inst, 1e9, 1.0, w_star) / 1e9 ==
          doctest::Approx(w_star).epsilon(1e-6));
}
