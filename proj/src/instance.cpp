#include "safebandit/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "safebandit/errors.hpp"

namespace safebandit {

Instance Instance::validate(std::vector<DiscreteDistribution> arms) {
    if (arms.empty())
        throw ValidationError(ValidationError::Kind::NoArms, "instance needs at least one arm");
    if (arms.size() > static_cast<std::size_t>(kMaxArms))
        throw ValidationError(ValidationError::Kind::TooManyArms,
                              "K = " + std::to_string(arms.size()) + " exceeds the cap of " +
                                  std::to_string(kMaxArms) + " (2^K subset states)");
    std::vector<double> means;
    means.reserve(arms.size());
    std::uint32_t above = 0, below = 0;
    for (std::size_t k = 0; k < arms.size(); ++k) {
        const double mu = arms[k].mean();
        if (std::abs(mu) < kZeroMeanEpsilon)
            throw ValidationError(ValidationError::Kind::ZeroMeanArm,
                                  "arm " + std::to_string(k + 1) + " has mean " +
                                      std::to_string(mu) + " within epsilon of 0");
        means.push_back(mu);
        const std::uint32_t bit = std::uint32_t{1} << (k + 1);
        (mu > 0 ? above : below) |= bit;
    }
    return Instance(std::move(arms), std::move(means), above, below);
}

namespace {

double json_number(const nlohmann::json& v, const char* what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        // Decimal strings are accepted for exact rational entry.
        const std::string& s = v.get_ref<const std::string&>();
        std::size_t pos = 0;
        double out;
        try {
            out = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw ValidationError(ValidationError::Kind::BadSupport,
                                  std::string("cannot parse ") + what + " '" + s + "'");
        }
        if (pos != s.size())
            throw ValidationError(ValidationError::Kind::BadSupport,
                                  std::string("trailing characters in ") + what + " '" + s + "'");
        return out;
    }
    throw ValidationError(ValidationError::Kind::BadSupport,
                          std::string(what) + " must be a number or a decimal string");
}

} // namespace

Instance Instance::from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(ValidationError::Kind::BadSupport,
                              std::string("instance file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("arms") || !doc["arms"].is_array())
        throw ValidationError(ValidationError::Kind::NoArms,
                              "instance document must be {\"arms\": [...]}");
    std::vector<DiscreteDistribution> arms;
    for (const auto& arm : doc["arms"]) {
        if (!arm.is_object() || !arm.contains("support") || !arm["support"].is_array())
            throw ValidationError(ValidationError::Kind::EmptySupport,
                                  "each arm must carry a \"support\" array");
        std::vector<DiscreteDistribution::Atom> atoms;
        for (const auto& pair : arm["support"]) {
            if (!pair.is_array() || pair.size() != 2)
                throw ValidationError(ValidationError::Kind::BadSupport,
                                      "support entries must be [value, probability] pairs");
            atoms.push_back({json_number(pair[0], "support value"),
                             json_number(pair[1], "probability")});
        }
        arms.emplace_back(std::move(atoms));
    }
    return validate(std::move(arms));
}

Instance Instance::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError(ValidationError::Kind::NoArms, "cannot open instance file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

double smallest_positive_support(const Instance& inst) {
    double out = std::numeric_limits<double>::infinity();
    for (int a = 1; a <= inst.arm_count(); ++a)
        for (const auto& atom : inst.distribution(a).support())
            if (atom.value > 0.0 && atom.value < out) out = atom.value;
    return out;
}

double largest_support(const Instance& inst) {
    double out = -std::numeric_limits<double>::infinity();
    for (int a = 1; a <= inst.arm_count(); ++a)
        out = std::max(out, inst.distribution(a).max_value());
    return out;
}

double below_gamma(const Instance& inst) {
    double gamma = 0.0;
    for (int a = 1; a <= inst.arm_count(); ++a)
        if (!inst.is_above(a)) gamma = std::max(gamma, std::abs(inst.mean(a)));
    return gamma;
}

} // namespace safebandit
