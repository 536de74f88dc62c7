#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "copomdp/belief.hpp"
#include "copomdp/env.hpp"
#include "copomdp/rng.hpp"
#include "copomdp/shield.hpp"

namespace copomdp {

enum class RolloutKind {
    kUniform,  // uniform over enabled actions
    kHeavy,    // repeats the previous action with some probability
};

struct PlannerConfig {
    double exploration = 1.0;
    int horizon = 500;
    int simulations = 100;
    int particles = 1000;
    RolloutKind rollout = RolloutKind::kUniform;
    double repeat_prob = 0.5;
    int rollout_depth = 0;  // 0: roll out to the remaining horizon
};

struct EpisodeResult {
    bool survived = true;
    bool goal_hit = false;
    double total_cost = 0.0;
    int steps = 0;
    std::vector<double> decision_seconds;
};

/// History-tree node. Children are keyed by the (action, observation,
/// level) edge that produced them; support and level are maintained
/// incrementally from the parent.
struct TreeNode {
    StateSet support;
    ResourceLevel level;
    int visits = 0;
    std::vector<int> action_visits;
    std::vector<double> action_value;  // mean cost-to-go per action
    std::vector<ActionId> allowed;
    std::unordered_map<std::uint64_t, std::unique_ptr<TreeNode>> children;
};

/// Online tree-search planner for one episode. With a shield attached it
/// only ever considers enabled actions -- in tree traversal, in rollouts,
/// and in the final selection; without one it is the plain unshielded
/// search where resource exhaustion drops simulated play into a breakdown
/// sink that accrues the environment's per-step breakdown cost.
class PomcpPlanner {
public:
    PomcpPlanner(const GenerativeEnv& env, const BeliefTracker& tracker, const Shield* shield,
                 const PlannerConfig& config, Rng& rng);

    /// Sets up the root from the initial observation and fills the particle
    /// belief from the observation-conditioned initial distribution.
    void start_episode(ObsId o0);

    /// Runs the configured number of simulations and returns the enabled
    /// action with the lowest value estimate.
    ActionId plan(int remaining_horizon);

    /// Moves the root along the played edge and refilters the particles by
    /// observation rejection; deprivation falls back to the exact support.
    void advance(ActionId played, ObsId obs, ResourceLevel new_level);

    const TreeNode& root() const { return *root_; }
    const std::vector<StateId>& particles() const { return particles_; }

    /// Samples one cost-to-go rollout; exposed for rollout-policy tests.
    double sample_rollout(StateId state, const StateSet& support, ResourceLevel level, int depth,
                          ActionId last_action);

private:
    double simulate(TreeNode& node, StateId state, int depth);
    ActionId select_tree_action(const TreeNode& node) const;
    ActionId select_rollout_action(const StateSet& support, ResourceLevel level,
                                   ActionId last_action, bool have_last);
    std::vector<ActionId> allowed_at(const StateSet& support, ResourceLevel level) const;
    std::unique_ptr<TreeNode> make_node(StateSet support, ResourceLevel level) const;
    std::uint64_t edge_key(ActionId a, ObsId o, ResourceLevel level) const;
    void note_return(double ret);
    double normalized(double q) const;

    const GenerativeEnv* env_;
    const BeliefTracker* tracker_;
    const Shield* shield_;
    PlannerConfig config_;
    Rng* rng_;
    std::unique_ptr<TreeNode> root_;
    std::vector<StateId> particles_;
    double return_min_ = 0.0;
    double return_max_ = 0.0;
    bool have_return_ = false;
    StateSet scratch_a_, scratch_b_;  // rollout support buffers
};

/// Plays one full episode against the environment. `shield == nullptr`
/// selects the unshielded baseline, where exhausting the resource ends the
/// run in a breakdown sink that accrues the breakdown step cost up to the
/// horizon.
EpisodeResult run_episode(const GenerativeEnv& env, const BeliefTracker& tracker,
                          const Shield* shield, const PlannerConfig& config, std::uint64_t seed);

}  // namespace copomdp
