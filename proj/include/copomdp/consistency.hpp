#pragma once

#include <optional>
#include <vector>

#include "copomdp/model.hpp"

namespace copomdp {

/// Where a state of a consumption-consistent model came from.
struct StateOrigin {
    StateId original;                  // source state in the input model
    std::optional<ActionId> action;    // set for inserted mid-step states
    bool inserted() const { return action.has_value(); }
};

struct ConsistentModel {
    ConsumptionPomdp model;
    std::vector<StateOrigin> origin;   // per state of `model`
    bool identity = false;             // input was already consistent
};

/// True iff every pair of lookalike states consumes equally under every
/// action.
bool is_consistent(const ConsumptionPomdp& model);

/// Rewrites the model so lookalike states consume equally: each selected
/// (s, a) step is split in two, with a fresh mid-step state that emits the
/// consumed amount as its observation and carries the consumption (and any
/// negative cost, so the negative-cost validity condition is preserved).
/// Consistent inputs are returned unchanged. With `minimal` set, only the
/// lookalike classes whose consumption actually conflicts are split;
/// otherwise every non-goal (s, a) pair is split.
ConsistentModel make_consistent(const ConsumptionPomdp& model, bool minimal = false);

}  // namespace copomdp
