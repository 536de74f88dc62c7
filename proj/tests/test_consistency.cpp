#include "doctest.h"

#include "copomdp/consistency.hpp"
#include "copomdp/benchmarks.hpp"
#include "copomdp/env.hpp"
#include "test_helpers.hpp"

using namespace copomdp;
using namespace copomdp::testing;

namespace {

// Two lookalike states with conflicting consumption under the only action.
ConsumptionPomdp conflicting_pair() {
    ConsumptionPomdp m;
    m.state_names = {"p", "q", "g"};
    m.action_names = {"a"};
    m.obs_names = {"shared", "done"};
    m.transitions = {{Distribution{{{2, 1.0}}}},
                     {Distribution{{{2, 1.0}}}},
                     {Distribution{{{2, 1.0}}}}};
    m.obs_fn = {Distribution{{{0, 1.0}}}, Distribution{{{0, 1.0}}}, Distribution{{{1, 1.0}}}};
    m.cons = {{1}, {2}, {0}};
    m.cost = {{1.0}, {1.0}, {0.0}};
    m.reloads = StateSet(3);
    m.goals = StateSet(3);
    m.goals.set(2);
    m.capacity = 5;
    m.init_distr = Distribution{{{0, 0.5}, {1, 0.5}}};
    m.init_level = 5;
    return m;
}

}  // namespace

TEST_CASE("consistency detection") {
    CHECK(is_consistent(build_infeasible_fork()));
    CHECK(is_consistent(build_tiger()));
    CHECK(is_consistent(build_uuv(default_uuv_params(8))));
    CHECK_FALSE(is_consistent(conflicting_pair()));
}

TEST_CASE("consistent models pass through unchanged") {
    const ConsumptionPomdp m = build_tiger();
    ConsistentModel r = make_consistent(m);
    CHECK(r.identity);
    CHECK(r.model.num_states() == m.num_states());
    for (StateId s = 0; s < m.num_states(); ++s) {
        CHECK(r.origin[s].original == s);
        CHECK_FALSE(r.origin[s].inserted());
    }
}

TEST_CASE("single split pair observes its consumption") {
    ConsumptionPomdp m = conflicting_pair();
    ConsistentModel r = make_consistent(m);
    CHECK_FALSE(r.identity);
    CHECK(is_consistent(r.model));
    CHECK(validate(r.model).empty());
    // Full construction splits every non-goal pair: 3 original + 2 inserted.
    CHECK(r.model.num_states() == 5);
    // The mid-step state for p emits "cons:1", the one for q "cons:2".
    const StateId mid_p = 3;
    CHECK(r.origin[mid_p].inserted());
    const ObsId obs_p = r.model.obs_fn[mid_p].entries[0].first;
    CHECK(r.model.obs_names[obs_p] == "cons:1");
    // Original states now consume zero; the mid-step carries the amount.
    CHECK(r.model.cons[0][0] == 0);
    CHECK(r.model.cons[mid_p][0] == 1);
}

TEST_CASE("minimal mode splits only conflicting classes") {
    ConsumptionPomdp m = conflicting_pair();
    ConsistentModel full = make_consistent(m, false);
    ConsistentModel min = make_consistent(m, true);
    CHECK(is_consistent(min.model));
    CHECK(min.model.num_states() <= full.model.num_states());
    CHECK(min.model.num_states() == 5);  // here the only class does conflict

    // A model with one conflicting class out of two splits only that class.
    Rng rng(5);
    for (int it = 0; it < 50; ++it) {
        ConsumptionPomdp rnd = random_copomdp(rng, 5, 2, 6, false);
        ConsistentModel fixed = make_consistent(rnd, true);
        CAPTURE(it);
        CHECK(is_consistent(fixed.model));
        CHECK(validate(fixed.model).empty());
    }
}

TEST_CASE("construction is idempotent") {
    ConsumptionPomdp m = conflicting_pair();
    ConsistentModel once = make_consistent(m);
    ConsistentModel twice = make_consistent(once.model);
    CHECK(twice.identity);
    CHECK(twice.model.num_states() == once.model.num_states());
}

TEST_CASE("paired simulation preserves cost and exhaustion") {
    Rng rng(17);
    for (int it = 0; it < 40; ++it) {
        ConsumptionPomdp original = random_copomdp(rng, 5, 2, 6, false);
        ConsistentModel fixed = make_consistent(original);
        if (fixed.identity) continue;
        REQUIRE(validate(fixed.model).empty());

        // Couple both models on the same action and transition randomness:
        // one original step corresponds to two transformed half-steps.
        for (int episode = 0; episode < 20; ++episode) {
            Rng ep(static_cast<std::uint64_t>(it) * 1000 + episode);
            StateId s_orig = original.init_distr.entries[0].first;
            StateId s_tr = s_orig;
            ResourceLevel l_orig(original.init_level);
            ResourceLevel l_tr(original.init_level);
            double cost_orig = 0, cost_tr = 0;
            for (int step = 0; step < 12; ++step) {
                const ActionId a = ep.uniform_index(original.num_actions());
                const double pick = ep.uniform_real();

                cost_orig += original.cost[s_orig][a];
                l_orig = next_level(original, l_orig, s_orig, a);

                // Transformed: first half enters the mid-step state.
                cost_tr += fixed.model.cost[s_tr][a];
                l_tr = next_level(fixed.model, l_tr, s_tr, a);
                const StateId mid = fixed.model.transitions[s_tr][a].entries[0].first;
                REQUIRE(fixed.origin[mid].inserted());
                cost_tr += fixed.model.cost[mid][0];
                l_tr = next_level(fixed.model, l_tr, mid, 0);

                // Shared draw resolves both distributions identically.
                const Distribution& d = original.transitions[s_orig][a];
                double acc = 0;
                StateId target = d.entries.back().first;
                for (const auto& [t, p] : d.entries) {
                    acc += p;
                    if (pick < acc) {
                        target = t;
                        break;
                    }
                }
                s_orig = target;
                s_tr = target;

                CAPTURE(it);
                CAPTURE(episode);
                CAPTURE(step);
                CHECK(cost_orig == doctest::Approx(cost_tr));
                CHECK(l_orig == l_tr);
                if (l_orig.is_exhausted()) break;
                if (original.is_goal(s_orig)) break;
            }
        }
    }
}

TEST_CASE("belief supports align at whole-step boundaries") {
    Rng rng(41);
    int checked = 0;
    for (int it = 0; it < 30; ++it) {
        ConsumptionPomdp original = random_copomdp(rng, 5, 2, 6, false);
        ConsistentModel fixed = make_consistent(original);
        if (fixed.identity) continue;
        BeliefTracker tr_orig(original);
        BeliefTracker tr_fixed(fixed.model);
        GenerativeEnv env(original);

        Rng ep(it);
        StateId s = env.sample_initial(ep);
        ObsId o0 = env.sample_obs(s, ep);
        BeliefNode node_orig{tr_orig.initial_support(o0), ResourceLevel(original.init_level)};
        BeliefNode node_fixed{tr_fixed.initial_support(o0), ResourceLevel(original.init_level)};

        for (int step = 0; step < 6; ++step) {
            const ActionId a = ep.uniform_index(original.num_actions());
            const StepOutcome out = env.step(s, a, ep);
            const ResourceLevel nl = next_level(original, node_orig.level, s, a);
            if (nl.is_exhausted()) break;
            node_orig = tr_orig.update(node_orig, a, out.obs, nl);

            // Transformed trace: the mid-step observation is the consumed
            // amount, then the original observation arrives.
            const StateId mid = fixed.model.transitions[s][a].entries[0].first;
            const ObsId mid_obs = fixed.model.obs_fn[mid].entries[0].first;
            const ResourceLevel mid_level = next_level(fixed.model, node_fixed.level, s, a);
            node_fixed = tr_fixed.update(node_fixed, a, mid_obs, mid_level);
            REQUIRE_FALSE(node_fixed.support.empty());
            node_fixed = tr_fixed.update(node_fixed, 0, out.obs, nl);

            // Restricted to original states the supports agree; levels agree.
            std::set<StateId> orig_set = to_set(node_orig.support);
            std::set<StateId> fixed_set;
            node_fixed.support.for_each([&](StateId x) {
                REQUIRE_FALSE(fixed.origin[x].inserted());
                fixed_set.insert(fixed.origin[x].original);
            });
            CAPTURE(it);
            CAPTURE(step);
            CHECK(orig_set == fixed_set);
            CHECK(node_orig.level == node_fixed.level);
            ++checked;
            s = out.next_state;
            if (original.is_goal(s)) break;
        }
    }
    CHECK(checked > 20);
}
