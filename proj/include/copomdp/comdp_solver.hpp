#pragma once

#include <vector>

#include "copomdp/qual_comdp.hpp"
#include "copomdp/resource.hpp"

namespace copomdp {

/// Per-state resource values; finite entries are concrete levels (possibly
/// above capacity for the reload-attractor computation), the rest infinite.
using LevelVector = std::vector<ResourceLevel>;

/// Least resource amount from which a reload state is surely reachable in
/// at least one step, with total consumption bounded by that amount. Goal
/// states are ordinary here; values above capacity are reported as computed
/// (callers truncate to infinity where appropriate).
LevelVector min_init_cons(const QualComdp& m);
LevelVector min_init_cons(const QualComdp& m, const StateSet& reloads);

struct SafeResult {
    LevelVector safe;            // minimal level admitting a never-exhausting policy
    StateSet surviving_reloads;  // reloads that survive the pruning loop
    StateSet havens;             // states that can absorb at zero consumption forever
};

/// Minimal safety levels. Reloads from which even a full battery cannot
/// guarantee reaching another usable reload or a zero-consumption haven are
/// demoted until stable; surviving reloads and havens sit at level 0. Goal
/// states are always havens in validated models.
SafeResult safe_levels(const QualComdp& m);
SafeResult safe_levels(const QualComdp& m, const StateSet& reloads);

/// Minimal levels admitting a never-exhausting policy that reaches a goal
/// with positive probability. `safe` must come from safe_levels on the same
/// reload set.
LevelVector pos_reach_levels(const QualComdp& m, const SafeResult& safe);

/// Minimal levels admitting a never-exhausting policy that reaches a goal
/// almost surely: reloads whose positive-reach value is infinite are demoted
/// and the safety/positive-reach pair is recomputed until stable.
LevelVector as_reach_levels(const QualComdp& m);

/// Greatest set of states with an action of zero consumption whose
/// successors all stay in the set. In validated models this is exactly the
/// goal set; in derived support models it also covers goal-support states
/// whose guess marker was invalidated.
StateSet zero_consumption_survivable(const QualComdp& m);

}  // namespace copomdp
