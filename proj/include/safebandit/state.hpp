#pragma once

#include <cstdint>
#include <vector>

namespace safebandit {

/**
 * A set of still-unobserved arms, the state of the goal MDP.
 *
 * Bit i (arms are numbered 1..K) is set iff arm i is unobserved. Bit 0
 * belongs to the safe arm and is never set. index() maps states to the
 * dense range [0, 2^K) used by the solver tables.
 */
class StateSet {
public:
    constexpr StateSet() = default;

    static StateSet full(int arm_count) {
        return StateSet(((std::uint32_t{1} << arm_count) - 1) << 1);
    }
    static StateSet from_mask(std::uint32_t mask) { return StateSet(mask); }
    static StateSet from_index(std::uint32_t index) { return StateSet(index << 1); }

    std::uint32_t mask() const { return mask_; }
    std::uint32_t index() const { return mask_ >> 1; }

    bool contains(int arm) const { return (mask_ >> arm) & 1u; }
    bool empty() const { return mask_ == 0; }
    int count() const { return __builtin_popcount(mask_); }

    StateSet without(int arm) const { return StateSet(mask_ & ~(std::uint32_t{1} << arm)); }
    StateSet with(int arm) const { return StateSet(mask_ | (std::uint32_t{1} << arm)); }
    StateSet intersect(std::uint32_t other_mask) const { return StateSet(mask_ & other_mask); }

    /// Member arm indices in ascending order.
    std::vector<int> arms() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(count()));
        for (std::uint32_t m = mask_; m != 0; m &= m - 1)
            out.push_back(__builtin_ctz(m));
        return out;
    }

    bool operator==(const StateSet& other) const { return mask_ == other.mask_; }
    bool operator!=(const StateSet& other) const { return mask_ != other.mask_; }

private:
    explicit constexpr StateSet(std::uint32_t mask) : mask_(mask) {}
    std::uint32_t mask_ = 0;
};

} // namespace safebandit
