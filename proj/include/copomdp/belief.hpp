#pragma once

#include <vector>

#include "copomdp/model.hpp"
#include "copomdp/resource.hpp"
#include "copomdp/state_set.hpp"

namespace copomdp {

/// Qualitative belief: the set of states the agent may occupy, paired with
/// the (observable) resource level at that point of the history.
struct BeliefNode {
    StateSet support;
    ResourceLevel level;
};

/// Precomputed masks that make belief updates and successor enumeration
/// cheap; these dominate both shield synthesis and planner runtime.
class BeliefTracker {
public:
    explicit BeliefTracker(const ConsumptionPomdp& model);

    const ConsumptionPomdp& model() const { return *model_; }

    /// Support of the length-0 history: supp(init_distr) restricted to
    /// states that can emit the initial observation. Empty means the
    /// observation is impossible under the initial distribution.
    StateSet initial_support(ObsId o0) const;

    /// Whether state s (a member of the previous support) can have produced
    /// the observed level transition under action a. Holds exactly when the
    /// previous level was already exhausted or the level update from s
    /// reproduces the observed next level.
    bool conforms(StateId s, ResourceLevel prev_level, ActionId a, ResourceLevel next_level) const;

    /// One-step support update: union of successors of conforming members,
    /// restricted to states that can emit o. Empty result signals an
    /// (observation, level) pair impossible from the given node.
    BeliefNode update(const BeliefNode& node, ActionId a, ObsId o, ResourceLevel next_level) const;

    /// All supports reachable from B in one step of a when the hidden state
    /// is s: one support per observation emitted by some successor of s,
    /// with duplicates removed. Assumes consumption-consistent models, where
    /// the level does not influence the support.
    std::vector<StateSet> support_successors(const StateSet& B, ActionId a, StateId s) const;

    /// Union over members of support_successors(B, a, s).
    std::vector<StateSet> support_successors(const StateSet& B, ActionId a) const;

    const StateSet& emitter_mask(ObsId o) const { return emitters_[o]; }
    const StateSet& successor_mask(StateId s, ActionId a) const {
        return succ_masks_[s * num_actions_ + a];
    }
    /// Observations that some successor of (s, a) can emit.
    const StateSet& successor_obs_mask(StateId s, ActionId a) const {
        return succ_obs_[s * num_actions_ + a];
    }

private:
    StateSet transition_union(const StateSet& B, ActionId a) const;

    const ConsumptionPomdp* model_;
    std::size_t num_actions_;
    std::vector<StateSet> emitters_;    // per observation, over states
    std::vector<StateSet> succ_masks_;  // per (s, a), over states
    std::vector<StateSet> succ_obs_;    // per (s, a), over observations
};

}  // namespace copomdp
