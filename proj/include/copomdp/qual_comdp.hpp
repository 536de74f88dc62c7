#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "copomdp/model.hpp"
#include "copomdp/state_set.hpp"

namespace copomdp {

/// Qualitative view of a fully observable consumption MDP: successor sets,
/// consumption, reloads, goals, capacity. Transition probabilities are
/// deliberately absent; every computation downstream is qualitative.
struct QualComdp {
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    std::vector<std::size_t> succ_offsets;  // CSR, size num_states*num_actions + 1
    std::vector<StateId> succ_targets;
    std::vector<int> cons;                  // per (s, a)
    StateSet reloads;
    StateSet goals;
    int capacity = 1;

    std::span<const StateId> successors(StateId s, ActionId a) const {
        const std::size_t idx = s * num_actions + a;
        return {succ_targets.data() + succ_offsets[idx],
                succ_targets.data() + succ_offsets[idx + 1]};
    }
    int consumption(StateId s, ActionId a) const { return cons[s * num_actions + a]; }
};

QualComdp qualitative_view(const ConsumptionPomdp& model);

}  // namespace copomdp
