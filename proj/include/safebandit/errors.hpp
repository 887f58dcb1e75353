#pragma once

#include <stdexcept>
#include <string>

namespace safebandit {

/// Instance-description validation failure; kind() names the violated rule.
class ValidationError : public std::runtime_error {
public:
    enum class Kind {
        NoArms,
        EmptySupport,
        BadSupport,           // values not strictly increasing / non-finite
        BadProbability,       // probability outside (0, 1]
        ProbabilitiesDontSum, // |sum - 1| > 1e-12
        ZeroMeanArm,          // |mean| below the zero-mean epsilon
        TooManyArms,          // K > 20 (subset-DP feasibility cap)
    };

    ValidationError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct SignViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct WrongAboveCount : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotPValid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BadPermutation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InstanceTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct HorizonZero : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BoundVacuous : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotTwoPoint : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct EpsilonOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct GeneratorModeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace safebandit
