#include "copomdp/comdp_solver.hpp"

#include <cassert>
#include <stdexcept>

namespace copomdp {

QualComdp qualitative_view(const ConsumptionPomdp& model) {
    QualComdp q;
    q.num_states = model.num_states();
    q.num_actions = model.num_actions();
    q.reloads = model.reloads;
    q.goals = model.goals;
    q.capacity = model.capacity;
    q.succ_offsets.reserve(q.num_states * q.num_actions + 1);
    q.succ_offsets.push_back(0);
    for (StateId s = 0; s < q.num_states; ++s)
        for (ActionId a = 0; a < q.num_actions; ++a) {
            for (const auto& [t, p] : model.transitions[s][a].entries)
                if (p > 0) q.succ_targets.push_back(t);
            q.succ_offsets.push_back(q.succ_targets.size());
            q.cons.push_back(model.cons[s][a]);
        }
    return q;
}

namespace {

ResourceLevel add_consumption(ResourceLevel v, int cons) {
    if (v.is_infinite()) return v;
    assert(v.is_amount());
    return ResourceLevel(v.amount() + cons);
}

// Least fixed point of the sure-reachability functional toward `targets`:
// the minimal budget that guarantees arriving at a target (in >= 1 step)
// with total consumption within the budget. Synchronous sweeps from the top
// of the lattice; each sweep is pointwise non-increasing.
LevelVector attractor_levels(const QualComdp& m, const StateSet& targets) {
    LevelVector x(m.num_states, ResourceLevel::infinite());
    LevelVector next(m.num_states);
    for (;;) {
        bool changed = false;
        for (StateId s = 0; s < m.num_states; ++s) {
            ResourceLevel best = ResourceLevel::infinite();
            for (ActionId a = 0; a < m.num_actions; ++a) {
                ResourceLevel worst(0);
                for (StateId t : m.successors(s, a)) {
                    ResourceLevel v = targets.test(t) ? ResourceLevel(0) : x[t];
                    if (v > worst) worst = v;
                }
                ResourceLevel cand = add_consumption(worst, m.consumption(s, a));
                if (cand < best) best = cand;
            }
            assert(best <= x[s]);
            next[s] = best;
            changed = changed || next[s] != x[s];
        }
        x.swap(next);
        if (!changed) return x;
    }
}

}  // namespace

StateSet zero_consumption_survivable(const QualComdp& m) {
    StateSet z(m.num_states);
    for (StateId s = 0; s < m.num_states; ++s) z.set(s);
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s = 0; s < m.num_states; ++s) {
            if (!z.test(s)) continue;
            bool ok = false;
            for (ActionId a = 0; a < m.num_actions && !ok; ++a) {
                if (m.consumption(s, a) != 0) continue;
                bool all_in = true;
                for (StateId t : m.successors(s, a)) all_in = all_in && z.test(t);
                ok = all_in;
            }
            if (!ok) {
                z.reset(s);
                changed = true;
            }
        }
    }
    return z;
}

LevelVector min_init_cons(const QualComdp& m) { return min_init_cons(m, m.reloads); }

LevelVector min_init_cons(const QualComdp& m, const StateSet& reloads) {
    return attractor_levels(m, reloads);
}

SafeResult safe_levels(const QualComdp& m) { return safe_levels(m, m.reloads); }

SafeResult safe_levels(const QualComdp& m, const StateSet& reloads) {
    SafeResult out;
    out.havens = zero_consumption_survivable(m);
    out.surviving_reloads = reloads;
    const ResourceLevel cap(m.capacity);

    LevelVector mic;
    for (;;) {
        StateSet targets = out.surviving_reloads | out.havens;
        mic = attractor_levels(m, targets);
        bool demoted = false;
        out.surviving_reloads.for_each([&](StateId r) {
            if (mic[r] > cap) {
                out.surviving_reloads.reset(r);
                demoted = true;
            }
        });
        if (!demoted) break;
    }

    out.safe.assign(m.num_states, ResourceLevel::infinite());
    for (StateId s = 0; s < m.num_states; ++s) {
        if (out.surviving_reloads.test(s) || out.havens.test(s))
            out.safe[s] = ResourceLevel(0);
        else if (mic[s] <= cap)
            out.safe[s] = mic[s];
    }
    return out;
}

LevelVector pos_reach_levels(const QualComdp& m, const SafeResult& sr) {
    LevelVector x(m.num_states, ResourceLevel::infinite());
    m.goals.for_each([&](StateId g) { x[g] = ResourceLevel(0); });
    LevelVector next(m.num_states);
    for (;;) {
        bool changed = false;
        for (StateId s = 0; s < m.num_states; ++s) {
            if (m.goals.test(s)) {
                next[s] = ResourceLevel(0);
                continue;
            }
            ResourceLevel best = ResourceLevel::infinite();
            for (ActionId a = 0; a < m.num_actions; ++a) {
                // Every outcome must stay safe; some witness outcome must
                // keep the goal positively reachable.
                ResourceLevel worst_safe(0);
                ResourceLevel best_witness = ResourceLevel::infinite();
                for (StateId t : m.successors(s, a)) {
                    if (sr.safe[t] > worst_safe) worst_safe = sr.safe[t];
                    if (x[t] < best_witness) best_witness = x[t];
                }
                ResourceLevel target = worst_safe > best_witness ? worst_safe : best_witness;
                ResourceLevel cand =
                    required_level(target, m.consumption(s, a),
                                   sr.surviving_reloads.test(s), m.capacity);
                if (cand < best) best = cand;
            }
            assert(best <= x[s]);
            next[s] = best;
            changed = changed || next[s] != x[s];
        }
        x.swap(next);
        if (!changed) return x;
    }
}

LevelVector as_reach_levels(const QualComdp& m) {
    StateSet working_reloads = m.reloads;
    for (;;) {
        SafeResult sr = safe_levels(m, working_reloads);
        LevelVector pr = pos_reach_levels(m, sr);
        bool demoted = false;
        sr.surviving_reloads.for_each([&](StateId r) {
            if (pr[r].is_infinite()) {
                sr.surviving_reloads.reset(r);
                demoted = true;
            }
        });
        if (!demoted) return pr;
        working_reloads = sr.surviving_reloads;
    }
}

}  // namespace copomdp
