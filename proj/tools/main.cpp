#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "safebandit/checks.hpp"
#include "safebandit/csv.hpp"
#include "safebandit/errors.hpp"
#include "safebandit/gmdp.hpp"
#include "safebandit/monte_carlo.hpp"

namespace fs = std::filesystem;
using namespace safebandit;

namespace {

struct CommonOpts {
    std::string instance_path;
    std::string out_dir;
    std::int64_t T = 0;
    std::int64_t episodes = 0;
    std::uint64_t seed = 0;
    std::string variant = "segb";
    std::string suite = "all";
    int trials = 100;
    std::vector<std::int64_t> t_list;
    int threads = 1;
    double tol = 1e-9;
    bool strict = false;
    bool force = false;
};

Variant parse_variant(const std::string& name) {
    if (name == "segb") return Variant::Segb;
    if (name == "segb-prime") return Variant::SegbPrime;
    throw UsageError("unknown variant '" + name + "'; use segb or segb-prime");
}

void prepare_out_dir(const CommonOpts& opts) {
    if (opts.out_dir.empty()) throw UsageError("--out DIR is required");
    const fs::path dir(opts.out_dir);
    if (fs::exists(dir) && !fs::is_empty(dir) && !opts.force)
        throw UsageError("output directory " + opts.out_dir +
                         " is not empty; pass --force to overwrite");
    fs::create_directories(dir);
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
    return (fs::path(opts.out_dir) / name).string();
}

Instance load_instance(const CommonOpts& opts) {
    if (opts.instance_path.empty()) throw UsageError("--instance PATH is required");
    return Instance::from_json_file(opts.instance_path);
}

int cmd_solve(const CommonOpts& opts) {
    const Instance inst = load_instance(opts);
    prepare_out_dir(opts);

    const Solution sol = solve_optimal(inst);
    const PolicyTable ogp = ogp_policy(inst);
    const ValueTable w_ogp = evaluate_policy(inst, ogp);

    write_text_file(out_path(opts, "wstar.csv"), value_table_csv(inst, sol.values));
    write_text_file(out_path(opts, "policy.csv"), policy_table_csv(inst, sol.policy));
    write_text_file(out_path(opts, "ogp_values.csv"), value_table_csv(inst, w_ogp));
    write_text_file(out_path(opts, "q_ogp.csv"), reach_table_csv(inst, reach_table(inst, ogp)));

    const StateSet a = inst.full_state();
    std::ostringstream summary;
    summary << "wstar_A,w_ogp_A,K,above_size,below_size\n"
            << format_double(sol.values.at(a)) << ',' << format_double(w_ogp.at(a)) << ','
            << inst.arm_count() << ',' << inst.above_count() << ',' << inst.below_count()
            << '\n';
    write_text_file(out_path(opts, "summary.csv"), summary.str());

    std::cout << "W*(A) = " << format_double(sol.values.at(a))
              << "  W(OGP,A) = " << format_double(w_ogp.at(a)) << "  K = " << inst.arm_count()
              << "  |above| = " << inst.above_count() << "  |below| = " << inst.below_count()
              << '\n';
    return 0;
}

McSummaryRow simulate_row(const Instance& inst, std::int64_t T, const CommonOpts& opts,
                          double w_star, bool& vacuous) {
    McSummaryRow row;
    row.T = T;
    row.result = monte_carlo_utility(inst, T, opts.episodes, opts.seed,
                                     parse_variant(opts.variant), opts.threads);
    row.w_star = w_star;
    row.floor = std::numeric_limits<double>::quiet_NaN();
    const double delta_min = smallest_positive_support(inst);
    if (std::isfinite(delta_min)) {
        try {
            row.floor = convergence_floor(inst, static_cast<double>(T), delta_min, w_star);
        } catch (const BoundVacuous&) {
            vacuous = true;
        }
    } else {
        vacuous = true;
    }
    return row;
}

int cmd_simulate(const CommonOpts& opts, bool sweep) {
    if (sweep && opts.t_list.empty()) throw UsageError("sweep needs --t-list a,b,c");
    if (!sweep && opts.T < 1) throw UsageError("simulate needs --T N (N >= 1)");
    if (opts.episodes < 1) throw UsageError("--episodes N (N >= 1) is required");

    const Instance inst = load_instance(opts);
    prepare_out_dir(opts);

    const Solution sol = solve_optimal(inst);
    const double w_star = sol.values.at(inst.full_state());

    bool vacuous = false;
    std::vector<McSummaryRow> rows;
    if (sweep) {
        for (std::int64_t T : opts.t_list) {
            if (T < 1) throw UsageError("every sweep horizon must be >= 1");
            rows.push_back(simulate_row(inst, T, opts, w_star, vacuous));
        }
    } else {
        rows.push_back(simulate_row(inst, opts.T, opts, w_star, vacuous));
    }
    write_text_file(out_path(opts, "mc_summary.csv"), mc_summary_csv(rows));

    // Trace of episode 0, the same episode the summary's first row includes.
    {
        Rng rng(episode_seed(opts.seed, 0));
        const Realization realization = Realization::draw(inst, rng);
        const EpisodeResult episode = run_segb_episode(inst, realization, rows.front().T, rng,
                                                       parse_variant(opts.variant));
        write_text_file(out_path(opts, "trace_first_episode.csv"),
                        episode_trace_csv(episode.rounds));
    }

    for (const McSummaryRow& row : rows)
        std::cout << "T = " << row.T << "  mean utility = " << format_double(row.result.mean_utility)
                  << "  se = " << format_double(row.result.std_error)
                  << "  mean exploration rounds = "
                  << format_double(row.result.mean_exploration_rounds) << '\n';

    if (vacuous && opts.strict) {
        std::cerr << "convergence floor vacuous for at least one row (strict mode)\n";
        return 1;
    }
    return 0;
}

int cmd_verify(const CommonOpts& opts) {
    const std::vector<std::string> known = {"lemma1", "thm2",   "prop1",  "prop2",
                                            "prop8",  "claim3", "qforms", "all"};
    if (std::find(known.begin(), known.end(), opts.suite) == known.end())
        throw UsageError("unknown suite '" + opts.suite +
                         "'; use lemma1, thm2, prop1, prop2, prop8, claim3, qforms or all");
    prepare_out_dir(opts);

    const GenConfig lemma_gen = [] {
        GenConfig g;
        g.mode = GenMode::Unrestricted;
        g.max_above = 4;
        g.max_below = 4;
        g.max_support = 4;
        return g;
    }();
    const GenConfig chain_gen = [] {
        GenConfig g;
        g.mode = GenMode::DominanceChain;
        g.max_above = 5;
        g.max_below = 5;
        g.max_support = 4;
        return g;
    }();
    const GenConfig one_above_gen = [] {
        GenConfig g;
        g.mode = GenMode::OneAbove;
        g.max_below = 5;
        g.max_support = 4;
        return g;
    }();

    std::map<std::string, std::vector<CheckReport>> suites;
    const auto want = [&](const std::string& name) {
        return opts.suite == "all" || opts.suite == name;
    };

    if (want("lemma1")) {
        suites["lemma1"] = {
            check_equivalence_lemma(lemma_gen, opts.seed, opts.trials, 20, opts.tol),
            check_equivalence_negative_control(opts.seed, opts.tol)};
    }
    if (want("thm2")) {
        suites["thm2"] = {check_ogp_optimality(chain_gen, opts.seed, opts.trials, opts.tol),
                          check_ogp_negative_control(opts.tol)};
    }
    if (want("prop1")) {
        suites["prop1"] = {
            check_two_point_suite({1, 2, 3, 9}, opts.seed, std::max(1, opts.trials / 10), 1e-12),
            check_two_point_negative_control(opts.seed, 1e-12)};
    }
    if (want("prop2")) {
        const Instance inst = convergence_reference_instance();
        suites["prop2"] = {
            check_prop2_convergence(inst, 2000, 50LL * opts.trials, opts.seed, opts.threads),
            check_prop2_negative_control(inst, 2000, 20LL * opts.trials, opts.seed,
                                         opts.threads)};
    }
    if (want("prop8")) {
        suites["prop8"] = {check_index_policy(one_above_gen, opts.seed, opts.trials, opts.tol),
                           check_index_policy_negative_control(one_above_gen, opts.seed,
                                                               opts.trials, opts.tol)};
    }
    if (want("claim3")) {
        suites["claim3"] = {check_claim3_counterexample(0.1),
                            check_claim3_negative_control(0.1)};
    }
    if (want("qforms")) {
        suites["qforms"] = {check_base_case_q_forms(opts.seed, opts.trials, 1e-12),
                            check_qforms_negative_control(opts.seed, 1e-12)};
    }
    std::vector<CheckReport> all_reports;
    std::vector<std::string> failing;
    for (const auto& [name, reports] : suites) {
        write_text_file(out_path(opts, name + ".json"), check_reports_json(name, reports));
        for (const CheckReport& r : reports) {
            all_reports.push_back(r);
            std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << name << " / " << r.check_name
                      << "  max_deviation = " << format_double(r.max_deviation) << '\n';
            if (!r.passed) failing.push_back(name + "/" + r.check_name);
        }
    }
    write_text_file(out_path(opts, "verify_summary.csv"), check_reports_csv(all_reports));

    if (!failing.empty()) {
        std::cerr << "failing checks:";
        for (const std::string& f : failing) std::cerr << ' ' << f;
        std::cerr << '\n';
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"safebandit: exact solver, simulator and verification suites for safe "
                 "explore-and-exploit with per-round Bayesian safety"};
    app.require_subcommand(1);

    CommonOpts opts;
    const auto add_common = [&](CLI::App* cmd, bool with_instance) {
        if (with_instance) cmd->add_option("--instance", opts.instance_path, "instance JSON file");
        cmd->add_option("--out", opts.out_dir, "output directory")->required();
        cmd->add_option("--seed", opts.seed, "64-bit master seed (default 0)");
        cmd->add_option("--threads", opts.threads, "worker cap (output independent of it)");
        cmd->add_flag("--force", opts.force, "overwrite a non-empty output directory");
    };

    CLI::App* solve = app.add_subcommand("solve", "exact subset-DP tables and the greedy policy");
    add_common(solve, true);

    CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo utility at one horizon");
    add_common(simulate, true);
    simulate->add_option("--T", opts.T, "horizon (rounds)");
    simulate->add_option("--episodes", opts.episodes, "episode count");
    simulate->add_option("--variant", opts.variant, "segb | segb-prime");
    simulate->add_flag("--strict", opts.strict, "fail when the convergence floor is vacuous");

    CLI::App* sweep = app.add_subcommand("sweep", "Monte-Carlo summary row per horizon");
    add_common(sweep, true);
    sweep->add_option("--t-list", opts.t_list, "comma-separated horizons")->delimiter(',');
    sweep->add_option("--episodes", opts.episodes, "episode count per horizon");
    sweep->add_option("--variant", opts.variant, "segb | segb-prime");
    sweep->add_flag("--strict", opts.strict, "fail when any convergence floor is vacuous");

    CLI::App* verify = app.add_subcommand("verify", "numerical verification suites");
    add_common(verify, false);
    verify->add_option("--suite", opts.suite,
                       "lemma1 | thm2 | prop1 | prop2 | prop8 | claim3 | qforms | all");
    verify->add_option("--trials", opts.trials, "instances per suite (default 100)");
    verify->add_option("--tol", opts.tol, "policy-level tolerance (default 1e-9)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(opts);
        if (simulate->parsed()) return cmd_simulate(opts, /*sweep=*/false);
        if (sweep->parsed()) return cmd_simulate(opts, /*sweep=*/true);
        if (verify->parsed()) return cmd_verify(opts);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "invalid instance: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
