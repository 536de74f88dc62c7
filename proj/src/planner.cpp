#include "copomdp/planner.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace copomdp {

namespace {
constexpr int kDeprivationRetryFactor = 16;

int level_code(ResourceLevel l) { return l.is_exhausted() ? 0 : l.amount() + 1; }
}  // namespace

PomcpPlanner::PomcpPlanner(const GenerativeEnv& env, const BeliefTracker& tracker,
                           const Shield* shield, const PlannerConfig& config, Rng& rng)
    : env_(&env),
      tracker_(&tracker),
      shield_(shield),
      config_(config),
      rng_(&rng),
      scratch_a_(env.model().num_states()),
      scratch_b_(env.model().num_states()) {}

std::uint64_t PomcpPlanner::edge_key(ActionId a, ObsId o, ResourceLevel level) const {
    const std::uint64_t span = env_->model().capacity + 2;
    return (a * env_->model().num_obs() + o) * span + level_code(level);
}

std::vector<ActionId> PomcpPlanner::allowed_at(const StateSet& support,
                                               ResourceLevel level) const {
    if (shield_) {
        std::vector<ActionId> out = shield_->allowed_actions(support, level);
        if (out.empty())
            throw std::logic_error("planner: shield enables no action (trap reached)");
        return out;
    }
    std::vector<ActionId> out(env_->model().num_actions());
    for (ActionId a = 0; a < out.size(); ++a) out[a] = a;
    return out;
}

std::unique_ptr<TreeNode> PomcpPlanner::make_node(StateSet support, ResourceLevel level) const {
    auto node = std::make_unique<TreeNode>();
    node->allowed = allowed_at(support, level);
    node->support = std::move(support);
    node->level = level;
    node->action_visits.assign(env_->model().num_actions(), 0);
    node->action_value.assign(env_->model().num_actions(), 0.0);
    return node;
}

void PomcpPlanner::start_episode(ObsId o0) {
    const ConsumptionPomdp& m = env_->model();
    StateSet support = tracker_->initial_support(o0);
    if (support.empty())
        throw std::runtime_error("planner: initial observation impossible under init_distr");
    root_ = make_node(std::move(support), ResourceLevel(m.init_level));

    // Particles follow the observation-conditioned initial distribution.
    std::vector<StateId> candidates;
    std::vector<double> weights;
    for (const auto& [s, p] : m.init_distr.entries) {
        const double w = p * m.obs_fn[s].probability_of(o0);
        if (w > 0) {
            candidates.push_back(s);
            weights.push_back(w);
        }
    }
    particles_.clear();
    for (int i = 0; i < config_.particles; ++i)
        particles_.push_back(candidates[rng_->sample_weighted(weights)]);
    have_return_ = false;
}

void PomcpPlanner::note_return(double ret) {
    if (!have_return_) {
        return_min_ = return_max_ = ret;
        have_return_ = true;
        return;
    }
    if (ret < return_min_) return_min_ = ret;
    if (ret > return_max_) return_max_ = ret;
}

double PomcpPlanner::normalized(double q) const {
    if (!have_return_ || return_max_ <= return_min_) return 0.5;
    return (q - return_min_) / (return_max_ - return_min_);
}

ActionId PomcpPlanner::select_tree_action(const TreeNode& node) const {
    for (ActionId a : node.allowed)
        if (node.action_visits[a] == 0) return a;
    ActionId best = node.allowed.front();
    double best_score = -std::numeric_limits<double>::infinity();
    for (ActionId a : node.allowed) {
        const double score = -normalized(node.action_value[a]) +
                             config_.exploration *
                                 std::sqrt(std::log(static_cast<double>(node.visits)) /
                                           node.action_visits[a]);
        if (score > best_score) {
            best_score = score;
            best = a;
        }
    }
    return best;
}

ActionId PomcpPlanner::select_rollout_action(const StateSet& support, ResourceLevel level,
                                             ActionId last_action, bool have_last) {
    const std::size_t na = env_->model().num_actions();
    const std::vector<ResourceLevel>* row = nullptr;
    if (shield_) {
        auto it = shield_->table().find(support);
        if (it == shield_->table().end())
            throw std::logic_error("planner: rollout left the shielded fragment");
        row = &it->second;
    }
    auto enabled = [&](ActionId a) { return !row || level >= (*row)[a]; };

    if (config_.rollout == RolloutKind::kHeavy && have_last && enabled(last_action) &&
        rng_->bernoulli(config_.repeat_prob))
        return last_action;

    std::size_t n_enabled = 0;
    for (ActionId a = 0; a < na; ++a)
        if (enabled(a)) ++n_enabled;
    if (n_enabled == 0)
        throw std::logic_error("planner: shield enables no action in rollout (trap reached)");
    std::size_t pick = rng_->uniform_index(n_enabled);
    for (ActionId a = 0; a < na; ++a)
        if (enabled(a) && pick-- == 0) return a;
    return na - 1;  // unreachable
}

double PomcpPlanner::sample_rollout(StateId state, const StateSet& support0, ResourceLevel level,
                                    int depth, ActionId last_action) {
    const ConsumptionPomdp& m = env_->model();
    const int limit = config_.rollout_depth > 0 ? std::min(config_.rollout_depth, depth) : depth;
    double total = 0.0;
    StateSet* cur = &scratch_a_;
    StateSet* next = &scratch_b_;
    *cur = support0;
    bool have_last = true;
    for (int d = 0; d < limit; ++d) {
        if (m.is_goal(state)) break;
        const ActionId a = select_rollout_action(*cur, level, last_action, have_last);
        const StepOutcome out = env_->step(state, a, *rng_);
        const ResourceLevel nl = next_level(m, level, state, a);
        total += out.cost;
        if (nl.is_exhausted()) {
            total += env_->breakdown_step_cost() * (limit - d - 1);
            break;
        }
        next->clear();
        cur->for_each([&](StateId s) {
            if (tracker_->conforms(s, level, a, nl)) *next |= tracker_->successor_mask(s, a);
        });
        *next &= tracker_->emitter_mask(out.obs);
        assert(!next->empty());
        std::swap(cur, next);
        state = out.next_state;
        level = nl;
        last_action = a;
        have_last = true;
    }
    return total;
}

double PomcpPlanner::simulate(TreeNode& node, StateId state, int depth) {
    const ConsumptionPomdp& m = env_->model();
    if (depth <= 0 || m.is_goal(state)) return 0.0;
    assert(node.support.test(state));

    const ActionId a = select_tree_action(node);
    const StepOutcome out = env_->step(state, a, *rng_);
    const ResourceLevel nl = next_level(m, node.level, state, a);

    double ret;
    if (nl.is_exhausted()) {
        assert(!shield_);
        ret = out.cost + env_->breakdown_step_cost() * (depth - 1);
    } else {
        const std::uint64_t key = edge_key(a, out.obs, nl);
        auto it = node.children.find(key);
        if (it == node.children.end()) {
            BeliefNode child_belief =
                tracker_->update({node.support, node.level}, a, out.obs, nl);
            if (child_belief.support.empty())
                throw std::logic_error("planner: simulated step produced an empty support");
            auto child = make_node(std::move(child_belief.support), nl);
            child->visits = 1;
            ret = out.cost + sample_rollout(out.next_state, child->support, nl, depth - 1, a);
            node.children.emplace(key, std::move(child));
        } else {
            ret = out.cost + simulate(*it->second, out.next_state, depth - 1);
        }
    }

    node.visits++;
    node.action_visits[a]++;
    node.action_value[a] += (ret - node.action_value[a]) / node.action_visits[a];
    note_return(ret);
    return ret;
}

ActionId PomcpPlanner::plan(int remaining_horizon) {
    if (root_->allowed.empty()) throw std::logic_error("planner: no action available at root");
    for (int i = 0; i < config_.simulations; ++i) {
        const StateId state = particles_[rng_->uniform_index(particles_.size())];
        simulate(*root_, state, remaining_horizon);
    }
    ActionId best = root_->allowed.front();
    bool found = false;
    double best_q = 0.0;
    for (ActionId a : root_->allowed) {
        if (root_->action_visits[a] == 0) continue;
        if (!found || root_->action_value[a] < best_q) {
            best = a;
            best_q = root_->action_value[a];
            found = true;
        }
    }
    return best;
}

void PomcpPlanner::advance(ActionId played, ObsId obs, ResourceLevel new_level) {
    // Rejection filtering against the real observation, from the particles
    // of the outgoing root.
    std::vector<StateId> survivors;
    const std::size_t want = particles_.size();
    std::size_t attempts = 0;
    const std::size_t max_attempts = want * kDeprivationRetryFactor;
    while (survivors.size() < want && attempts < max_attempts) {
        const StateId s = particles_[rng_->uniform_index(particles_.size())];
        const StepOutcome out = env_->step(s, played, *rng_);
        if (out.obs == obs) survivors.push_back(out.next_state);
        ++attempts;
    }

    const std::uint64_t key = edge_key(played, obs, new_level);
    auto it = root_->children.find(key);
    std::unique_ptr<TreeNode> next_root;
    if (it != root_->children.end()) {
        next_root = std::move(it->second);
    } else {
        BeliefNode b = tracker_->update({root_->support, root_->level}, played, obs, new_level);
        if (b.support.empty())
            throw std::runtime_error("planner: real observation inconsistent with the support");
        next_root = make_node(std::move(b.support), new_level);
    }
    root_ = std::move(next_root);

    particles_.clear();
    if (survivors.empty()) {
        // Particle deprivation: fall back to the exact support, uniformly.
        const std::vector<std::size_t> members = root_->support.to_indices();
        for (std::size_t i = 0; i < want; ++i)
            particles_.push_back(members[rng_->uniform_index(members.size())]);
    } else {
        for (std::size_t i = 0; i < want; ++i)
            particles_.push_back(survivors[rng_->uniform_index(survivors.size())]);
    }
#ifndef NDEBUG
    for (StateId s : particles_) assert(root_->support.test(s));
#endif
}

EpisodeResult run_episode(const GenerativeEnv& env, const BeliefTracker& tracker,
                          const Shield* shield, const PlannerConfig& config, std::uint64_t seed) {
    const ConsumptionPomdp& m = env.model();
    Rng rng(seed);
    PomcpPlanner planner(env, tracker, shield, config, rng);

    StateId state = env.sample_initial(rng);
    const ObsId o0 = env.sample_obs(state, rng);
    ResourceLevel level(m.init_level);
    planner.start_episode(o0);

    EpisodeResult result;
    for (;;) {
        if (m.is_goal(state)) {
            result.goal_hit = true;
            break;
        }
        if (result.steps >= config.horizon) break;

        const auto t0 = std::chrono::steady_clock::now();
        const ActionId a = planner.plan(config.horizon - result.steps);
        result.decision_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

        if (shield && !shield->enabled(planner.root().support, level, a))
            throw std::logic_error("run_episode: planner chose a disabled action");

        const StepOutcome out = env.step(state, a, rng);
        const ResourceLevel nl = next_level(m, level, state, a);
        result.total_cost += out.cost;
        result.steps++;

        if (nl.is_exhausted()) {
            result.survived = false;
            result.total_cost += env.breakdown_step_cost() * (config.horizon - result.steps);
            break;
        }

        planner.advance(a, out.obs, nl);
        assert(planner.root().level == nl);
        assert(planner.root().support.test(out.next_state));
        state = out.next_state;
        level = nl;
    }
    return result;
}

}  // namespace copomdp
