#include "safebandit/monte_carlo.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace safebandit {

namespace {

struct EpisodeOutcome {
    double utility;
    double exploration_rounds;
    std::int64_t violations;
};

EpisodeOutcome run_one(const Instance& inst, std::int64_t T, std::uint64_t master_seed,
                       std::int64_t e, Variant variant) {
    Rng rng(episode_seed(master_seed, static_cast<std::uint64_t>(e)));
    const Realization realization = Realization::draw(inst, rng);
    const EpisodeResult res =
        run_segb_episode(inst, realization, T, rng, variant, /*record_rounds=*/false);
    return {res.utility, static_cast<double>(res.exploration_rounds), res.safety_violations};
}

} // namespace

McResult monte_carlo_utility(const Instance& inst, std::int64_t T, std::int64_t episodes,
                             std::uint64_t master_seed, Variant variant, int threads) {
    if (episodes < 1) throw std::invalid_argument("episodes must be at least 1");
    if (threads < 1) threads = 1;

    // Outcomes are stored per episode index and reduced sequentially below,
    // so the result does not depend on the worker partition.
    std::vector<EpisodeOutcome> outcomes(static_cast<std::size_t>(episodes));
    if (threads == 1) {
        for (std::int64_t e = 0; e < episodes; ++e)
            outcomes[static_cast<std::size_t>(e)] = run_one(inst, T, master_seed, e, variant);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::int64_t e = w; e < episodes; e += threads)
                    outcomes[static_cast<std::size_t>(e)] =
                        run_one(inst, T, master_seed, e, variant);
            });
        }
        for (auto& th : pool) th.join();
    }

    McResult out;
    out.episodes = episodes;
    double sum_u = 0.0, sum_expl = 0.0;
    for (const EpisodeOutcome& o : outcomes) {
        sum_u += o.utility;
        sum_expl += o.exploration_rounds;
        out.safety_violations += o.violations;
    }
    out.mean_utility = sum_u / static_cast<double>(episodes);
    out.mean_exploration_rounds = sum_expl / static_cast<double>(episodes);
    if (episodes > 1) {
        double ss = 0.0;
        for (const EpisodeOutcome& o : outcomes) {
            const double d = o.utility - out.mean_utility;
            ss += d * d;
        }
        out.std_error = std::sqrt(ss / static_cast<double>(episodes - 1)) /
                        std::sqrt(static_cast<double>(episodes));
    }
    return out;
}

} // namespace safebandit
