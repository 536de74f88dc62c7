#include "copomdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace copomdp {

void Distribution::normalize_order() {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

bool Distribution::sums_to_one(double tol) const {
    double total = 0;
    for (const auto& [i, p] : entries) {
        if (p < 0) return false;
        total += p;
    }
    return std::abs(total - 1.0) <= tol;
}

double Distribution::probability_of(std::size_t index) const {
    for (const auto& [i, p] : entries)
        if (i == index) return p;
    return 0.0;
}

std::vector<std::size_t> Distribution::support() const {
    std::vector<std::size_t> out;
    for (const auto& [i, p] : entries)
        if (p > 0) out.push_back(i);
    return out;
}

StateSet ConsumptionPomdp::emitters(ObsId o) const {
    StateSet out(num_states());
    for (StateId s = 0; s < num_states(); ++s)
        if (obs_fn[s].probability_of(o) > 0) out.set(s);
    return out;
}

ConsumptionPomdp with_identity_observations(ConsumptionPomdp model) {
    model.obs_names = model.state_names;
    model.obs_fn.clear();
    for (StateId s = 0; s < model.num_states(); ++s)
        model.obs_fn.push_back(Distribution{{{s, 1.0}}});
    return model;
}

bool lookalike(const ConsumptionPomdp& model, StateId s, StateId t) {
    for (const auto& [o, p] : model.obs_fn[s].entries)
        if (p > 0 && model.obs_fn[t].probability_of(o) > 0) return true;
    return false;
}

ResourceLevel next_level(const ConsumptionPomdp& model, ResourceLevel level, StateId s,
                         ActionId a) {
    return next_level(level, model.cons[s][a], model.is_reload(s), model.capacity);
}

ResourceLevel required_level(const ConsumptionPomdp& model, ResourceLevel target, StateId s,
                             ActionId a) {
    return required_level(target, model.cons[s][a], model.is_reload(s), model.capacity);
}

namespace {

void check_distributions(const ConsumptionPomdp& m, std::vector<ValidationIssue>& issues) {
    auto bad = [&](const std::string& what) {
        issues.push_back({"distribution", what + " is not a probability distribution"});
    };
    for (StateId s = 0; s < m.num_states(); ++s) {
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            const auto& d = m.transitions[s][a];
            if (d.entries.empty() || !d.sums_to_one())
                bad("transition(" + m.state_names[s] + "," + m.action_names[a] + ")");
            for (const auto& [t, p] : d.entries)
                if (t >= m.num_states())
                    issues.push_back({"range", "transition target out of range"});
        }
        const auto& od = m.obs_fn[s];
        if (od.entries.empty() || !od.sums_to_one()) bad("obs_fn(" + m.state_names[s] + ")");
        for (const auto& [o, p] : od.entries)
            if (o >= m.num_obs()) issues.push_back({"range", "observation out of range"});
    }
    if (!m.init_distr.sums_to_one() || m.init_distr.entries.empty())
        bad("init_distr");
}

void check_goals(const ConsumptionPomdp& m, std::vector<ValidationIssue>& issues) {
    m.goals.for_each([&](StateId g) {
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            const auto& d = m.transitions[g][a];
            const bool self_loop = d.entries.size() == 1 && d.entries[0].first == g &&
                                   d.entries[0].second > 0;
            if (!self_loop)
                issues.push_back({"goal-absorbing",
                                  "goal state " + m.state_names[g] + " is not absorbing under " +
                                      m.action_names[a]});
            if (m.cons[g][a] != 0)
                issues.push_back({"goal-consumption",
                                  "goal state " + m.state_names[g] + " consumes under " +
                                      m.action_names[a]});
            if (m.cost[g][a] != 0.0)
                issues.push_back({"goal-cost", "goal state " + m.state_names[g] +
                                                   " has nonzero cost under " +
                                                   m.action_names[a]});
        }
    });
}

void check_observability(const ConsumptionPomdp& m, std::vector<ValidationIssue>& issues) {
    for (ObsId o = 0; o < m.num_obs(); ++o) {
        StateSet em = m.emitters(o);
        if (em.empty()) continue;
        const bool any_reload = em.intersects(m.reloads);
        const bool all_reload = em.is_subset_of(m.reloads);
        if (any_reload && !all_reload)
            issues.push_back({"reload-lookalike", "observation " + m.obs_names[o] +
                                                      " is shared by reload and non-reload states"});
        const bool any_goal = em.intersects(m.goals);
        const bool all_goal = em.is_subset_of(m.goals);
        if (any_goal && !all_goal)
            issues.push_back({"goal-lookalike", "observation " + m.obs_names[o] +
                                                    " is shared by goal and non-goal states"});
    }
}

// Cycle search in the zero-consumption edge subgraph restricted to non-goal
// states. A cycle here means the agent could postpone consumption forever
// without having reached a goal.
void check_zero_cycles(const ConsumptionPomdp& m, std::vector<ValidationIssue>& issues) {
    const std::size_t n = m.num_states();
    std::vector<std::vector<StateId>> adj(n);
    for (StateId s = 0; s < n; ++s) {
        if (m.is_goal(s)) continue;
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            if (m.cons[s][a] != 0) continue;
            for (const auto& [t, p] : m.transitions[s][a].entries)
                if (p > 0 && !m.is_goal(t)) adj[s].push_back(t);
        }
    }
    // Iterative DFS with colors; 0 = white, 1 = on stack, 2 = done.
    std::vector<int> color(n, 0);
    for (StateId root = 0; root < n; ++root) {
        if (color[root] != 0) continue;
        std::vector<std::pair<StateId, std::size_t>> stack{{root, 0}};
        color[root] = 1;
        while (!stack.empty()) {
            auto& [s, idx] = stack.back();
            if (idx < adj[s].size()) {
                StateId t = adj[s][idx++];
                if (color[t] == 1) {
                    issues.push_back({"zero-cycle",
                                      "zero-consumption cycle through non-goal state " +
                                          m.state_names[t]});
                    return;
                }
                if (color[t] == 0) {
                    color[t] = 1;
                    stack.push_back({t, 0});
                }
            } else {
                color[s] = 2;
                stack.pop_back();
            }
        }
    }
}

void check_costs(const ConsumptionPomdp& m, std::vector<ValidationIssue>& issues) {
    for (StateId s = 0; s < m.num_states(); ++s)
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            if (m.cost[s][a] >= 0) continue;
            for (const auto& [t, p] : m.transitions[s][a].entries)
                if (p > 0 && !m.is_goal(t)) {
                    issues.push_back({"negative-cost",
                                      "negative cost on (" + m.state_names[s] + "," +
                                          m.action_names[a] +
                                          ") with a non-goal successor " + m.state_names[t]});
                    break;
                }
        }
}

}  // namespace

std::vector<ValidationIssue> validate(const ConsumptionPomdp& m) {
    std::vector<ValidationIssue> issues;
    if (m.capacity < 1) issues.push_back({"capacity", "capacity must be at least 1"});
    if (m.init_level < 0 || m.init_level > m.capacity)
        issues.push_back({"init-level", "initial level outside [0, capacity]"});
    for (StateId s = 0; s < m.num_states(); ++s)
        for (ActionId a = 0; a < m.num_actions(); ++a)
            if (m.cons[s][a] < 0)
                issues.push_back({"consumption", "negative consumption on (" + m.state_names[s] +
                                                     "," + m.action_names[a] + ")"});
    check_distributions(m, issues);
    check_goals(m, issues);
    check_observability(m, issues);
    check_zero_cycles(m, issues);
    check_costs(m, issues);
    return issues;
}

void validate_or_throw(const ConsumptionPomdp& m) {
    auto issues = validate(m);
    if (issues.empty()) return;
    std::ostringstream os;
    os << "model validation failed:";
    for (const auto& i : issues) os << "\n  [" << i.code << "] " << i.message;
    throw std::runtime_error(os.str());
}

}  // namespace copomdp
