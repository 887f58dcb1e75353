#include "safebandit/generator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "safebandit/errors.hpp"

namespace safebandit {

namespace {

// n positive integers summing to 64, via distinct cut points.
std::vector<int> random_composition(Rng& rng, int n) {
    std::set<int> cuts;
    while (static_cast<int>(cuts.size()) < n - 1)
        cuts.insert(1 + static_cast<int>(rng.next_below(63)));
    std::vector<int> parts;
    int prev = 0;
    for (int c : cuts) {
        parts.push_back(c - prev);
        prev = c;
    }
    parts.push_back(64 - prev);
    return parts;
}

// Random dyadic-grid distribution: values k/8 in [-span, span], distinct and
// ascending; probabilities in 64ths summing to exactly 1. sign > 0 demands a
// positive mean, sign < 0 a negative one, 0 leaves it free (but nonzero).
DiscreteDistribution random_distribution(Rng& rng, int max_support, int span, int sign) {
    const int grid = 16 * span + 1; // k in [-8*span, 8*span]
    for (;;) {
        const int n = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_support)));
        std::set<int> ks;
        while (static_cast<int>(ks.size()) < n)
            ks.insert(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(grid))) - 8 * span);
        const std::vector<int> parts = random_composition(rng, n);
        std::vector<DiscreteDistribution::Atom> atoms;
        int idx = 0;
        for (int k : ks)
            atoms.push_back({static_cast<double>(k) / 8.0,
                             static_cast<double>(parts[idx++]) / 64.0});
        DiscreteDistribution d(std::move(atoms));
        const double mu = d.mean();
        if (std::abs(mu) < 1.0 / 64.0) continue;
        if (sign > 0 && mu <= 0.0) continue;
        if (sign < 0 && mu >= 0.0) continue;
        return d;
    }
}

DiscreteDistribution shift(const DiscreteDistribution& d, double c) {
    std::vector<DiscreteDistribution::Atom> atoms = d.support();
    for (auto& a : atoms) a.value += c;
    return DiscreteDistribution(std::move(atoms));
}

int draw_count(Rng& rng, int lo, int hi) {
    if (hi < lo) hi = lo;
    return lo + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

DiscreteDistribution two_point_arm(Rng& rng, int high, int sign) {
    // P(X = high) = m/64; mean = m/64 * (high + 1) - 1.
    for (;;) {
        const int m = 1 + static_cast<int>(rng.next_below(63));
        const double p = static_cast<double>(m) / 64.0;
        const double mu = p * (high + 1) - 1.0;
        if (std::abs(mu) < 1.0 / 64.0) continue;
        if (sign > 0 && mu <= 0.0) continue;
        if (sign < 0 && mu >= 0.0) continue;
        return DiscreteDistribution({{-1.0, 1.0 - p}, {static_cast<double>(high), p}});
    }
}

} // namespace

Instance InstanceGenerator::next() {
    const GenConfig& c = config_;
    std::vector<DiscreteDistribution> arms;

    switch (c.mode) {
    case GenMode::Unrestricted: {
        const int na = draw_count(rng_, c.min_above, c.max_above);
        const int nb = draw_count(rng_, c.min_below, c.max_below);
        for (int k = 0; k < na; ++k)
            arms.push_back(random_distribution(rng_, c.max_support, c.value_span, +1));
        for (int k = 0; k < nb; ++k)
            arms.push_back(random_distribution(rng_, c.max_support, c.value_span, -1));
        break;
    }
    case GenMode::OneAbove: {
        const int nb = draw_count(rng_, std::max(1, c.min_below), c.max_below);
        arms.push_back(random_distribution(rng_, c.max_support, c.value_span, +1));
        for (int k = 0; k < nb; ++k)
            arms.push_back(random_distribution(rng_, c.max_support, c.value_span, -1));
        break;
    }
    case GenMode::DominanceChain: {
        const int na = draw_count(rng_, c.min_above, c.max_above);
        const int nb = draw_count(rng_, std::max(1, c.min_below), c.max_below);
        for (int k = 0; k < na; ++k)
            arms.push_back(random_distribution(rng_, c.max_support, c.value_span, +1));
        // One common base support shifted downward arm by arm: shifting
        // preserves first-order dominance exactly, so the below arms form a
        // chain by construction.
        const DiscreteDistribution base =
            random_distribution(rng_, c.max_support, c.value_span, 0);
        double offset = -base.mean() - 0.125;
        std::vector<DiscreteDistribution> below;
        for (int k = 0; k < nb; ++k) {
            below.push_back(shift(base, offset));
            offset -= 0.125 * static_cast<double>(1 + rng_.next_below(8));
        }
        for (std::size_t k = 1; k < below.size(); ++k) {
            if (!stochastically_dominates(below[k - 1], below[k]))
                throw std::logic_error("shifted chain lost dominance"); // unreachable
        }
        for (auto& d : below) arms.push_back(std::move(d));
        break;
    }
    case GenMode::TwoPoint: {
        const int na = draw_count(rng_, std::max(1, c.min_above), c.max_above);
        const int nb = draw_count(rng_, std::max(1, c.min_below), c.max_below);
        for (int k = 0; k < na; ++k) arms.push_back(two_point_arm(rng_, c.two_point_high, +1));
        for (int k = 0; k < nb; ++k) arms.push_back(two_point_arm(rng_, c.two_point_high, -1));
        break;
    }
    }
    return Instance::validate(std::move(arms));
}

} // namespace safebandit
