#include "copomdp/consistency.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace copomdp {

namespace {

// Union-find over states; states sharing an observation are merged, so each
// class is one connected component of the lookalike relation.
struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void merge(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

UnionFind lookalike_components(const ConsumptionPomdp& m) {
    UnionFind uf(m.num_states());
    for (ObsId o = 0; o < m.num_obs(); ++o) {
        StateSet em = m.emitters(o);
        StateId first = em.first();
        if (first >= m.num_states()) continue;
        em.for_each([&](StateId s) { uf.merge(first, s); });
    }
    return uf;
}

}  // namespace

bool is_consistent(const ConsumptionPomdp& m) {
    for (ObsId o = 0; o < m.num_obs(); ++o) {
        StateSet em = m.emitters(o);
        StateId first = em.first();
        if (first >= m.num_states()) continue;
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            bool ok = true;
            em.for_each([&](StateId s) { ok = ok && m.cons[s][a] == m.cons[first][a]; });
            if (!ok) return false;
        }
    }
    return true;
}

ConsistentModel make_consistent(const ConsumptionPomdp& input, bool minimal) {
    ConsistentModel result;
    if (is_consistent(input)) {
        result.model = input;
        result.identity = true;
        for (StateId s = 0; s < input.num_states(); ++s)
            result.origin.push_back(StateOrigin{s, std::nullopt});
        return result;
    }

    const std::size_t ns = input.num_states();
    const std::size_t na = input.num_actions();

    // Which (s, a) pairs to split. Full construction: every non-goal pair.
    // Minimal: only pairs in lookalike components whose consumption under
    // that action disagrees.
    std::vector<std::vector<bool>> split(ns, std::vector<bool>(na, false));
    if (minimal) {
        UnionFind uf = lookalike_components(input);
        std::map<std::pair<std::size_t, ActionId>, std::vector<StateId>> by_class;
        for (StateId s = 0; s < ns; ++s)
            for (ActionId a = 0; a < na; ++a)
                by_class[{uf.find(s), a}].push_back(s);
        for (const auto& [key, members] : by_class) {
            const ActionId a = key.second;
            bool differ = false;
            for (StateId s : members)
                if (input.cons[s][a] != input.cons[members.front()][a]) differ = true;
            if (differ)
                for (StateId s : members) split[s][a] = true;
        }
    } else {
        for (StateId s = 0; s < ns; ++s)
            if (!input.is_goal(s))
                for (ActionId a = 0; a < na; ++a) split[s][a] = true;
    }

    ConsumptionPomdp out;
    out.state_names = input.state_names;
    out.action_names = input.action_names;
    out.obs_names = input.obs_names;
    for (StateId s = 0; s < ns; ++s) result.origin.push_back(StateOrigin{s, std::nullopt});

    // Mid-step states, one per split pair, observed as their consumption.
    std::map<int, ObsId> cons_obs;
    std::vector<std::vector<StateId>> mid(ns, std::vector<StateId>(na, 0));
    for (StateId s = 0; s < ns; ++s)
        for (ActionId a = 0; a < na; ++a) {
            if (!split[s][a]) continue;
            const int k = input.cons[s][a];
            if (!cons_obs.count(k)) {
                cons_obs[k] = out.obs_names.size();
                out.obs_names.push_back("cons:" + std::to_string(k));
            }
            mid[s][a] = out.state_names.size();
            out.state_names.push_back(input.state_names[s] + ">" + input.action_names[a]);
            result.origin.push_back(StateOrigin{s, a});
        }

    const std::size_t total = out.state_names.size();
    out.transitions.assign(total, std::vector<Distribution>(na));
    out.obs_fn.assign(total, Distribution{});
    out.cons.assign(total, std::vector<int>(na, 0));
    out.cost.assign(total, std::vector<double>(na, 0.0));
    out.reloads = StateSet(total);
    out.goals = StateSet(total);
    input.reloads.for_each([&](StateId s) { out.reloads.set(s); });
    input.goals.for_each([&](StateId s) { out.goals.set(s); });

    for (StateId s = 0; s < ns; ++s) {
        out.obs_fn[s] = input.obs_fn[s];
        for (ActionId a = 0; a < na; ++a) {
            if (!split[s][a]) {
                out.transitions[s][a] = input.transitions[s][a];
                out.cons[s][a] = input.cons[s][a];
                out.cost[s][a] = input.cost[s][a];
                continue;
            }
            const StateId t = mid[s][a];
            const int k = input.cons[s][a];
            const double c = input.cost[s][a];
            out.transitions[s][a] = Distribution{{{t, 1.0}}};
            out.cons[s][a] = 0;
            // Negative "reward" costs ride the resolving half-step so they
            // stay attached to transitions that enter goal states.
            out.cost[s][a] = c < 0 ? 0.0 : c;
            out.obs_fn[t] = Distribution{{{cons_obs[k], 1.0}}};
            for (ActionId b = 0; b < na; ++b) {
                out.transitions[t][b] = input.transitions[s][a];
                out.cons[t][b] = k;
                out.cost[t][b] = c < 0 ? c : 0.0;
            }
        }
    }

    out.capacity = input.capacity;
    out.init_distr = input.init_distr;
    out.init_level = input.init_level;
    result.model = std::move(out);
    return result;
}

}  // namespace copomdp
