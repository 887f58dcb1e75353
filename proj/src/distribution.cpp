#include "safebandit/distribution.hpp"

#include <cmath>
#include <set>

#include "safebandit/errors.hpp"

namespace safebandit {

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> support)
    : support_(std::move(support)) {
    if (support_.empty())
        throw ValidationError(ValidationError::Kind::EmptySupport, "empty support");
    double sum = 0.0;
    double mean = 0.0;
    for (std::size_t k = 0; k < support_.size(); ++k) {
        const Atom& a = support_[k];
        if (!std::isfinite(a.value))
            throw ValidationError(ValidationError::Kind::BadSupport, "non-finite support value");
        if (k > 0 && !(support_[k - 1].value < a.value))
            throw ValidationError(ValidationError::Kind::BadSupport,
                                  "support values must be strictly increasing");
        if (!(a.probability > 0.0) || a.probability > 1.0 || !std::isfinite(a.probability))
            throw ValidationError(ValidationError::Kind::BadProbability,
                                  "probabilities must lie in (0, 1]");
        sum += a.probability;
        mean += a.value * a.probability;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ValidationError(ValidationError::Kind::ProbabilitiesDontSum,
                              "probabilities sum to " + std::to_string(sum));
    mean_ = mean;
}

double DiscreteDistribution::cdf(double v) const {
    double acc = 0.0;
    for (const Atom& a : support_) {
        if (a.value > v) break;
        acc += a.probability;
    }
    return acc;
}

double DiscreteDistribution::tail(double v) const {
    double acc = 0.0;
    for (auto it = support_.rbegin(); it != support_.rend(); ++it) {
        if (it->value < v) break;
        acc += it->probability;
    }
    return acc;
}

double DiscreteDistribution::pr_eq(double v) const {
    for (const Atom& a : support_)
        if (a.value == v) return a.probability;
    return 0.0;
}

double DiscreteDistribution::sample(Rng& rng) const {
    const double u = rng.next_double();
    double cum = 0.0;
    for (const Atom& a : support_) {
        cum += a.probability;
        if (cum > u) return a.value;
    }
    // Cumulative rounding can leave cum marginally below u at the end.
    return support_.back().value;
}

bool stochastically_dominates(const DiscreteDistribution& d1, const DiscreteDistribution& d2) {
    std::set<double> points;
    for (const auto& a : d1.support()) points.insert(a.value);
    for (const auto& a : d2.support()) points.insert(a.value);
    for (double v : points) {
        if (d1.tail(v) < d2.tail(v) - 1e-15) return false;
    }
    return true;
}

} // namespace safebandit
