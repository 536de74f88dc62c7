#include "copomdp/env.hpp"

namespace copomdp {

std::size_t GenerativeEnv::sample_dist(const Distribution& d, Rng& rng) {
    if (d.entries.size() == 1) return d.entries[0].first;
    double x = rng.uniform_real();
    double acc = 0;
    for (std::size_t i = 0; i + 1 < d.entries.size(); ++i) {
        acc += d.entries[i].second;
        if (x < acc) return d.entries[i].first;
    }
    return d.entries.back().first;
}

StateId GenerativeEnv::sample_initial(Rng& rng) const {
    return sample_dist(model_->init_distr, rng);
}

ObsId GenerativeEnv::sample_obs(StateId s, Rng& rng) const {
    return sample_dist(model_->obs_fn[s], rng);
}

StepOutcome GenerativeEnv::step(StateId s, ActionId a, Rng& rng) const {
    const StateId t = sample_dist(model_->transitions[s][a], rng);
    const ObsId o = sample_obs(t, rng);
    double cost = model_->cost[s][a];
    if (!model_->is_goal(s) && model_->is_goal(t)) cost += goal_entry_cost_;
    return {t, o, cost};
}

}  // namespace copomdp
