#pragma once

#include "copomdp/model.hpp"
#include "copomdp/rng.hpp"

namespace copomdp {

struct StepOutcome {
    StateId next_state;
    ObsId obs;
    double cost;
};

/// Black-box simulator of a model. The planner only samples steps through
/// this interface; it never reads transition probabilities. Two scalars
/// shape episode accounting beyond the per-pair cost table: a one-time cost
/// collected on entering a goal state (negative for goal rewards that the
/// table cannot carry), and the per-step cost charged after a resource
/// breakdown in unshielded runs.
class GenerativeEnv {
public:
    explicit GenerativeEnv(const ConsumptionPomdp& model, double goal_entry_cost = 0.0,
                           double breakdown_step_cost = 0.0)
        : model_(&model),
          goal_entry_cost_(goal_entry_cost),
          breakdown_step_cost_(breakdown_step_cost) {}

    const ConsumptionPomdp& model() const { return *model_; }
    double breakdown_step_cost() const { return breakdown_step_cost_; }
    double goal_entry_cost() const { return goal_entry_cost_; }

    StateId sample_initial(Rng& rng) const;
    ObsId sample_obs(StateId s, Rng& rng) const;
    StepOutcome step(StateId s, ActionId a, Rng& rng) const;

private:
    static std::size_t sample_dist(const Distribution& d, Rng& rng);

    const ConsumptionPomdp* model_;
    double goal_entry_cost_;
    double breakdown_step_cost_;
};

}  // namespace copomdp
