#include "safebandit/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "safebandit/errors.hpp"

namespace safebandit {

Beliefs::Beliefs(const Instance& inst)
    : known_(static_cast<std::size_t>(inst.arm_count())) {
    means_.reserve(known_.size());
    for (int a = 1; a <= inst.arm_count(); ++a) means_.push_back(inst.mean(a));
}

double Beliefs::value(int arm) const {
    if (arm == 0) return 0.0;
    const auto& k = known_[arm - 1];
    return k ? *k : means_[arm - 1];
}

void Beliefs::observe(int arm, double x) {
    if (arm == 0) throw std::invalid_argument("the safe arm is never explored");
    auto& slot = known_[arm - 1];
    if (slot && *slot != x)
        throw std::logic_error("static rewards: an explored arm cannot change value");
    slot = x;
}

Portfolio::Portfolio(std::vector<std::pair<int, double>> entries)
    : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
    double sum = 0.0;
    for (const auto& [arm, w] : entries_) {
        if (arm < 0 || w < 0.0 || w > 1.0 || !std::isfinite(w))
            throw std::invalid_argument("portfolio weights must lie in [0, 1]");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("portfolio weights must sum to 1");
}

Portfolio Portfolio::from_weights(std::vector<std::pair<int, double>> entries) {
    return Portfolio(std::move(entries));
}

Portfolio Portfolio::singleton(int arm) { return Portfolio({{arm, 1.0}}); }

Portfolio Portfolio::pair(double mu_i, double mu_j, int i, int j) {
    if (!(mu_i > 0.0) || !(mu_j < 0.0))
        throw SignViolation("pair portfolio needs mu_i > 0 > mu_j");
    if (i == j) throw SignViolation("pair portfolio needs two distinct arms");
    const double d = mu_i - mu_j;
    return Portfolio({{i, -mu_j / d}, {j, mu_i / d}});
}

Portfolio Portfolio::realized_pair(double x_i, double mu_j, int i, int j) {
    if (!(x_i > 0.0) || !(mu_j < 0.0))
        throw SignViolation("realized pair portfolio needs x_i > 0 > mu_j");
    if (i == j) throw SignViolation("realized pair portfolio needs two distinct arms");
    const double d = x_i - mu_j;
    return Portfolio({{i, -mu_j / d}, {j, x_i / d}});
}

double Portfolio::weight(int arm) const {
    for (const auto& [a, w] : entries_)
        if (a == arm) return w;
    return 0.0;
}

double Portfolio::expected_value(const Beliefs& beliefs) const {
    double acc = 0.0;
    for (const auto& [arm, w] : entries_) acc += w * beliefs.value(arm);
    return acc;
}

int Portfolio::sample_arm(Rng& rng) const {
    const double u = rng.next_double();
    double cum = 0.0;
    for (const auto& [arm, w] : entries_) {
        cum += w;
        if (cum > u) return arm;
    }
    return entries_.back().first;
}

bool is_safe(const Portfolio& p, const Beliefs& beliefs, double tol) {
    return p.expected_value(beliefs) >= -tol;
}

Portfolio prior_pair(const Instance& inst, int i, int j) {
    return Portfolio::pair(inst.mean(i), inst.mean(j), i, j);
}

} // namespace safebandit
