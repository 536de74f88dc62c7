#include "copomdp/belief.hpp"

#include <algorithm>

namespace copomdp {

BeliefTracker::BeliefTracker(const ConsumptionPomdp& model)
    : model_(&model), num_actions_(model.num_actions()) {
    const std::size_t ns = model.num_states();
    const std::size_t no = model.num_obs();

    emitters_.assign(no, StateSet(ns));
    for (StateId s = 0; s < ns; ++s)
        for (const auto& [o, p] : model.obs_fn[s].entries)
            if (p > 0) emitters_[o].set(s);

    succ_masks_.assign(ns * num_actions_, StateSet(ns));
    succ_obs_.assign(ns * num_actions_, StateSet(no));
    for (StateId s = 0; s < ns; ++s)
        for (ActionId a = 0; a < num_actions_; ++a) {
            StateSet& mask = succ_masks_[s * num_actions_ + a];
            StateSet& obs = succ_obs_[s * num_actions_ + a];
            for (const auto& [t, p] : model.transitions[s][a].entries)
                if (p > 0) {
                    mask.set(t);
                    for (const auto& [o, q] : model.obs_fn[t].entries)
                        if (q > 0) obs.set(o);
                }
        }
}

StateSet BeliefTracker::initial_support(ObsId o0) const {
    StateSet out(model_->num_states());
    for (const auto& [s, p] : model_->init_distr.entries)
        if (p > 0 && emitters_[o0].test(s)) out.set(s);
    return out;
}

bool BeliefTracker::conforms(StateId s, ResourceLevel prev_level, ActionId a,
                             ResourceLevel next) const {
    if (prev_level.is_exhausted()) return true;
    return next_level(*model_, prev_level, s, a) == next;
}

BeliefNode BeliefTracker::update(const BeliefNode& node, ActionId a, ObsId o,
                                 ResourceLevel next) const {
    StateSet out(model_->num_states());
    node.support.for_each([&](StateId s) {
        if (conforms(s, node.level, a, next)) out |= succ_masks_[s * num_actions_ + a];
    });
    out &= emitters_[o];
    return BeliefNode{out, next};
}

StateSet BeliefTracker::transition_union(const StateSet& B, ActionId a) const {
    StateSet out(model_->num_states());
    B.for_each([&](StateId s) { out |= succ_masks_[s * num_actions_ + a]; });
    return out;
}

std::vector<StateSet> BeliefTracker::support_successors(const StateSet& B, ActionId a,
                                                        StateId s) const {
    const StateSet propagated = transition_union(B, a);
    std::vector<StateSet> out;
    succ_obs_[s * num_actions_ + a].for_each([&](ObsId o) {
        StateSet b = propagated & emitters_[o];
        if (b.empty()) return;
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(std::move(b));
    });
    return out;
}

std::vector<StateSet> BeliefTracker::support_successors(const StateSet& B, ActionId a) const {
    const StateSet propagated = transition_union(B, a);
    StateSet all_obs(model_->num_obs());
    B.for_each([&](StateId s) { all_obs |= succ_obs_[s * num_actions_ + a]; });
    std::vector<StateSet> out;
    all_obs.for_each([&](ObsId o) {
        StateSet b = propagated & emitters_[o];
        if (b.empty()) return;
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(std::move(b));
    });
    return out;
}

}  // namespace copomdp
