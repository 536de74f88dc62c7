#pragma once

#include <vector>

#include "copomdp/env.hpp"
#include "copomdp/model.hpp"

namespace copomdp {

/// Resource-constrained listening game. The agent faces two doors hiding a
/// prize and a predator; listening yields a noisy side reading and drains
/// the battery, recharging flips the hidden side with some probability, and
/// opening a door ends the run.
struct TigerParams {
    double p_correct = 0.85;   // probability the side reading is right
    double switch_prob = 0.2;  // side flip during a recharge
    int capacity = 10;
    double step_cost = 10.0;
    double predator_cost = 5000.0;
    double prize_cost = -500.0;
};

/// Grid navigation with a drifting weak move, a deterministic strong move
/// at double consumption, a noisy position sensor, recharge cells at the
/// quadrant centers and a docking goal in the far corner.
struct UuvParams {
    int size = 8;
    int capacity = 12;
    int strong_cons = 2;
    int weak_cons = 1;
    double step_cost = 1.0;
    double goal_entry_cost = -1000.0;  // carried by the simulator, not the cost table
    double p_forward = 0.5;            // weak move goes forward; rest drifts sideways
    std::vector<std::pair<int, int>> reload_cells;  // defaults: quadrant centers
    std::vector<std::pair<int, int>> goal_cells;    // default: far corner
    std::pair<int, int> start{0, 0};
};

/// Capacity table for the canonical grid sizes; size+4 otherwise.
int default_uuv_capacity(int size);
UuvParams default_uuv_params(int size);

ConsumptionPomdp build_tiger(const TigerParams& params = {});
ConsumptionPomdp build_uuv(const UuvParams& params);

GenerativeEnv tiger_env(const ConsumptionPomdp& model, const TigerParams& params = {});
GenerativeEnv uuv_env(const ConsumptionPomdp& model, const UuvParams& params);

/// Six-state fixture: an initial fork into two indistinguishable corridors,
/// one of which dead-ends at a recharge loop. No level of resource admits a
/// policy that is both exhaustion-free and almost-surely goal-reaching, so
/// shield synthesis must report infeasibility. Shipped as models/
/// infeasible_fork.json; this builder is its in-code twin.
ConsumptionPomdp build_infeasible_fork();

}  // namespace copomdp
