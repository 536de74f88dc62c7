#include "copomdp/comdp_oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace copomdp {

namespace {

struct ConfigGraph {
    const QualComdp* m;
    int cap;
    std::size_t configs;

    std::size_t id(StateId s, int level) const { return s * (cap + 1) + level; }

    // Level after playing a from (s, level); -1 when the step exhausts.
    int after(StateId s, int level, ActionId a) const {
        ResourceLevel nl = next_level(ResourceLevel(level), m->consumption(s, a),
                                      m->reloads.test(s), cap);
        return nl.is_exhausted() ? -1 : nl.amount();
    }
};

// Greatest fixed point: a configuration is safe when some action avoids
// exhaustion and keeps every successor configuration safe. Goal
// configurations are always safe.
std::vector<char> compute_safe(const ConfigGraph& g) {
    std::vector<char> safe(g.configs, 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s = 0; s < g.m->num_states; ++s) {
            if (g.m->goals.test(s)) continue;
            for (int l = 0; l <= g.cap; ++l) {
                if (!safe[g.id(s, l)]) continue;
                bool ok = false;
                for (ActionId a = 0; a < g.m->num_actions && !ok; ++a) {
                    int nl = g.after(s, l, a);
                    if (nl < 0) continue;
                    bool all = true;
                    for (StateId t : g.m->successors(s, a)) all = all && safe[g.id(t, nl)];
                    ok = all;
                }
                if (!ok) {
                    safe[g.id(s, l)] = 0;
                    changed = true;
                }
            }
        }
    }
    return safe;
}

// Least fixed point of positive goal reachability inside `inside`, using
// only actions that keep every successor inside.
std::vector<char> positive_reach_within(const ConfigGraph& g, const std::vector<char>& inside) {
    std::vector<char> pos(g.configs, 0);
    for (StateId s = 0; s < g.m->num_states; ++s)
        if (g.m->goals.test(s))
            for (int l = 0; l <= g.cap; ++l)
                if (inside[g.id(s, l)]) pos[g.id(s, l)] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s = 0; s < g.m->num_states; ++s) {
            if (g.m->goals.test(s)) continue;
            for (int l = 0; l <= g.cap; ++l) {
                const std::size_t c = g.id(s, l);
                if (!inside[c] || pos[c]) continue;
                for (ActionId a = 0; a < g.m->num_actions; ++a) {
                    int nl = g.after(s, l, a);
                    if (nl < 0) continue;
                    bool all_inside = true;
                    bool some_pos = false;
                    for (StateId t : g.m->successors(s, a)) {
                        all_inside = all_inside && inside[g.id(t, nl)];
                        some_pos = some_pos || pos[g.id(t, nl)];
                    }
                    if (all_inside && some_pos) {
                        pos[c] = 1;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
    return pos;
}

// Iterated elimination for almost-sure reachability: keep shrinking the
// candidate set to configurations that positively reach a goal while staying
// inside the candidate set.
std::vector<char> compute_as_reach(const ConfigGraph& g, const std::vector<char>& safe) {
    std::vector<char> candidate = safe;
    for (;;) {
        std::vector<char> kept = positive_reach_within(g, candidate);
        if (kept == candidate) return candidate;
        candidate = std::move(kept);
    }
}

// Budgeted sure reachability of reload states: reach[s][b] holds when some
// action fits the budget and every successor either is a reload or reaches
// one within the remaining budget.
LevelVector compute_reload_attractor(const QualComdp& m, std::size_t config_budget) {
    int max_cons = 0;
    for (int c : m.cons) max_cons = std::max(max_cons, c);
    const int budget_max = static_cast<int>(m.num_states) * max_cons;
    const std::size_t grid = m.num_states * static_cast<std::size_t>(budget_max + 1);
    if (grid > config_budget)
        throw std::runtime_error("product_oracle: budget grid exceeds the configuration budget");

    auto idx = [&](StateId s, int b) { return s * (budget_max + 1) + b; };
    std::vector<char> reach(grid, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s = 0; s < m.num_states; ++s)
            for (int b = 0; b <= budget_max; ++b) {
                if (reach[idx(s, b)]) continue;
                for (ActionId a = 0; a < m.num_actions; ++a) {
                    const int c = m.consumption(s, a);
                    if (c > b) continue;
                    bool all = true;
                    for (StateId t : m.successors(s, a))
                        all = all && (m.reloads.test(t) || reach[idx(t, b - c)]);
                    if (all) {
                        reach[idx(s, b)] = 1;
                        changed = true;
                        break;
                    }
                }
            }
    }

    LevelVector out(m.num_states, ResourceLevel::infinite());
    for (StateId s = 0; s < m.num_states; ++s)
        for (int b = 0; b <= budget_max; ++b)
            if (reach[idx(s, b)]) {
                out[s] = ResourceLevel(b);
                break;
            }
    return out;
}

LevelVector min_levels(const ConfigGraph& g, const std::vector<char>& in) {
    LevelVector out(g.m->num_states, ResourceLevel::infinite());
    for (StateId s = 0; s < g.m->num_states; ++s)
        for (int l = 0; l <= g.cap; ++l)
            if (in[g.id(s, l)]) {
                out[s] = ResourceLevel(l);
                break;
            }
    return out;
}

}  // namespace

OracleResult product_oracle(const QualComdp& m, std::size_t config_budget) {
    const std::size_t configs = m.num_states * static_cast<std::size_t>(m.capacity + 1);
    if (configs > config_budget)
        throw std::runtime_error("product_oracle: configuration space exceeds the budget");

    ConfigGraph g{&m, m.capacity, configs};
    OracleResult out;
    std::vector<char> safe = compute_safe(g);
    std::vector<char> pos = positive_reach_within(g, safe);
    std::vector<char> as = compute_as_reach(g, safe);
    out.safe_min = min_levels(g, safe);
    out.pos_reach_min = min_levels(g, pos);
    out.as_reach_min = min_levels(g, as);
    out.reload_attr_min = compute_reload_attractor(m, config_budget);
    return out;
}

}  // namespace copomdp
