#pragma once

// Test-only oracles: brute-force enumerations kept deliberately independent
// of the library's factorized/recursive implementations.

#include <cstdint>
#include <vector>

#include "safebandit/instance.hpp"
#include "safebandit/state.hpp"

namespace safebandit::oracles {

/// E[max_{a in arm_mask} X(a) * 1{exists a in gate_mask: X(a) > 0}] by full
/// product-space enumeration over all K arms. Feasible for K <= ~8 with
/// small supports.
inline double expected_max_gated_enum(const Instance& inst, std::uint32_t arm_mask,
                                      std::uint32_t gate_mask) {
    const int K = inst.arm_count();
    std::vector<std::size_t> idx(static_cast<std::size_t>(K), 0);
    double total = 0.0;
    for (;;) {
        double prob = 1.0;
        double best = -std::numeric_limits<double>::infinity();
        bool fired = false;
        bool any_in_max = false;
        for (int a = 1; a <= K; ++a) {
            const auto& atom = inst.distribution(a).support()[idx[a - 1]];
            prob *= atom.probability;
            if ((arm_mask >> a) & 1u) {
                any_in_max = true;
                if (atom.value > best) best = atom.value;
            }
            if (((gate_mask >> a) & 1u) && atom.value > 0.0) fired = true;
        }
        if (fired && any_in_max) total += prob * best;
        int a = 0;
        for (; a < K; ++a) {
            if (++idx[a] < inst.distribution(a + 1).support().size()) break;
            idx[a] = 0;
        }
        if (a == K) break;
    }
    return total;
}

inline double expected_terminal_reward_enum(const Instance& inst, StateSet explored) {
    return expected_max_gated_enum(inst, StateSet::full(inst.arm_count()).mask(),
                                   explored.mask());
}

} // namespace safebandit::oracles
