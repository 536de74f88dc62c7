#pragma once

#include "copomdp/comdp_solver.hpp"
#include "copomdp/qual_comdp.hpp"

namespace copomdp {

/// Exact classification of the explicit configuration graph over
/// (state, level) pairs. Independent of the fixed-point solver: every set is
/// computed directly on the enumerated graph, so this is the testing oracle
/// for the level computations.
struct OracleResult {
    LevelVector reload_attr_min;  // min budget surely reaching a reload (>= 1 step)
    LevelVector safe_min;         // min level of a SAFE configuration
    LevelVector pos_reach_min;    // min level of a positively-goal-reaching SAFE config
    LevelVector as_reach_min;     // min level of an almost-surely-goal-reaching config
};

/// Refuses (throws) when the configuration space exceeds `config_budget`.
OracleResult product_oracle(const QualComdp& m, std::size_t config_budget = 1000000);

}  // namespace copomdp
