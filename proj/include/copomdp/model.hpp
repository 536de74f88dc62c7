#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "copomdp/resource.hpp"
#include "copomdp/state_set.hpp"

namespace copomdp {

using StateId = std::size_t;
using ActionId = std::size_t;
using ObsId = std::size_t;

/// Sparse discrete distribution: (index, probability) pairs sorted by index.
struct Distribution {
    std::vector<std::pair<std::size_t, double>> entries;

    void normalize_order();
    bool sums_to_one(double tol = 1e-9) const;
    double probability_of(std::size_t index) const;
    std::vector<std::size_t> support() const;
    bool operator==(const Distribution& o) const { return entries == o.entries; }
};

/// Consumption POMDP. States, actions, and observations are dense indices;
/// display names live in the *_names side tables. Immutable after
/// construction (validation and all solvers take it by const reference).
struct ConsumptionPomdp {
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;
    std::vector<std::string> obs_names;

    // transitions[s][a], obs_fn[s], cons[s][a], cost[s][a].
    std::vector<std::vector<Distribution>> transitions;
    std::vector<Distribution> obs_fn;
    std::vector<std::vector<int>> cons;
    std::vector<std::vector<double>> cost;

    StateSet reloads;
    StateSet goals;
    int capacity = 1;
    Distribution init_distr;
    int init_level = 0;

    std::size_t num_states() const { return state_names.size(); }
    std::size_t num_actions() const { return action_names.size(); }
    std::size_t num_obs() const { return obs_names.size(); }

    bool is_reload(StateId s) const { return reloads.test(s); }
    bool is_goal(StateId s) const { return goals.test(s); }

    /// Bitset of states that can emit observation o.
    StateSet emitters(ObsId o) const;
};

/// Fully observable special case: a consumption MDP is a consumption POMDP
/// whose observation function is the identity. This helper attaches one.
ConsumptionPomdp with_identity_observations(ConsumptionPomdp model);

/// True iff the observation supports of s and t intersect.
bool lookalike(const ConsumptionPomdp& model, StateId s, StateId t);

/// Level after playing a in s at the given level.
ResourceLevel next_level(const ConsumptionPomdp& model, ResourceLevel level, StateId s, ActionId a);

/// Minimal level needed in s so that playing a leaves at least `target`.
ResourceLevel required_level(const ConsumptionPomdp& model, ResourceLevel target, StateId s,
                             ActionId a);

struct ValidationIssue {
    std::string code;
    std::string message;
};

/// Structural checks for the standing model assumptions: well-formed
/// distributions, absorbing zero-cost goals, reload/goal observability,
/// no zero-consumption cycle among non-goal states, and negative costs
/// restricted to transitions that enter goal states only.
std::vector<ValidationIssue> validate(const ConsumptionPomdp& model);

/// Throws std::runtime_error listing every issue when validation fails.
void validate_or_throw(const ConsumptionPomdp& model);

}  // namespace copomdp
