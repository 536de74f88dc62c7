#include "doctest.h"

#include "copomdp/comdp_oracle.hpp"
#include "copomdp/comdp_solver.hpp"
#include "test_helpers.hpp"

using namespace copomdp;
using namespace copomdp::testing;

namespace {

// Chain s0 -cons-> s1 -cons-> ... -> goal, optional reload in the middle.
ConsumptionPomdp chain(std::vector<int> cons, int cap, std::set<StateId> reloads = {}) {
    const std::size_t ns = cons.size() + 1;
    ConsumptionPomdp m;
    for (std::size_t s = 0; s < ns; ++s) m.state_names.push_back("s" + std::to_string(s));
    m.action_names = {"a"};
    m.transitions.assign(ns, std::vector<Distribution>(1));
    m.cons.assign(ns, std::vector<int>(1, 0));
    m.cost.assign(ns, std::vector<double>(1, 0.0));
    for (std::size_t s = 0; s + 1 < ns; ++s) {
        m.transitions[s][0] = Distribution{{{s + 1, 1.0}}};
        m.cons[s][0] = cons[s];
    }
    m.transitions[ns - 1][0] = Distribution{{{ns - 1, 1.0}}};
    m.reloads = StateSet(ns);
    for (StateId r : reloads) m.reloads.set(r);
    m.goals = StateSet(ns);
    m.goals.set(ns - 1);
    m.capacity = cap;
    m.init_distr = Distribution{{{0, 1.0}}};
    m.init_level = cap;
    return with_identity_observations(std::move(m));
}

}  // namespace

TEST_CASE("reload attractor on simple shapes") {
    // Reload with a two-unit action straight back into a reload zone.
    ConsumptionPomdp m = chain({2, 1}, 8, {0, 1});
    QualComdp q = qualitative_view(m);
    LevelVector mic = min_init_cons(q);
    CHECK(mic[0] == ResourceLevel(2));  // one step to the next reload
    CHECK(mic[1] == ResourceLevel::infinite());  // goal is not a reload

    // No reload anywhere: everything infinite.
    ConsumptionPomdp m2 = chain({1, 1}, 5);
    LevelVector mic2 = min_init_cons(qualitative_view(m2));
    for (const ResourceLevel& v : mic2) CHECK(v.is_infinite());
}

TEST_CASE("safety levels on simple shapes") {
    // Goal at the end: safety via the zero-consumption absorption.
    ConsumptionPomdp m = chain({2, 3}, 5);
    SafeResult sr = safe_levels(qualitative_view(m));
    CHECK(sr.safe[2] == ResourceLevel(0));  // the goal itself
    CHECK(sr.safe[1] == ResourceLevel(3));
    CHECK(sr.safe[0] == ResourceLevel(5));

    // A reload whose escape costs more than the capacity is demoted.
    ConsumptionPomdp m2 = chain({2, 7}, 5, {0});
    SafeResult sr2 = safe_levels(qualitative_view(m2));
    CHECK_FALSE(sr2.surviving_reloads.test(0));
    CHECK(sr2.safe[0].is_infinite());

    // Same shape, big enough battery: the reload survives at level zero.
    ConsumptionPomdp m3 = chain({2, 3}, 5, {0});
    SafeResult sr3 = safe_levels(qualitative_view(m3));
    CHECK(sr3.surviving_reloads.test(0));
    CHECK(sr3.safe[0] == ResourceLevel(0));
}

TEST_CASE("positive and almost-sure reach on simple shapes") {
    ConsumptionPomdp m = chain({2}, 5);
    QualComdp q = qualitative_view(m);
    SafeResult sr = safe_levels(q);
    LevelVector pr = pos_reach_levels(q, sr);
    CHECK(pr[1] == ResourceLevel(0));
    CHECK(pr[0] == ResourceLevel(2));
    LevelVector as = as_reach_levels(q);
    CHECK(as[0] == ResourceLevel(2));

    // Branch that may fall into a pit: positive reach is fine from the
    // branch point, almost-sure reach is not.
    ConsumptionPomdp b;
    b.state_names = {"s", "pit", "g"};
    b.action_names = {"a"};
    b.transitions = {{Distribution{{{1, 0.5}, {2, 0.5}}}},
                     {Distribution{{{1, 1.0}}}},
                     {Distribution{{{2, 1.0}}}}};
    b.cons = {{1}, {1}, {0}};
    b.cost = {{0.0}, {0.0}, {0.0}};
    b.reloads = StateSet(3);
    b.reloads.set(1);  // the pit reloads forever but never reaches the goal
    b.goals = StateSet(3);
    b.goals.set(2);
    b.capacity = 4;
    b.init_distr = Distribution{{{0, 1.0}}};
    b.init_level = 4;
    auto bq = qualitative_view(with_identity_observations(std::move(b)));
    SafeResult bsr = safe_levels(bq);
    LevelVector bpr = pos_reach_levels(bq, bsr);
    CHECK(bpr[0] == ResourceLevel(1));
    LevelVector bas = as_reach_levels(bq);
    CHECK(bas[0].is_infinite());
}

TEST_CASE("ordering and capping invariants") {
    Rng rng(1234);
    for (int it = 0; it < 100; ++it) {
        ConsumptionPomdp m = random_comdp(rng);
        QualComdp q = qualitative_view(m);
        SafeResult sr = safe_levels(q);
        LevelVector pr = pos_reach_levels(q, sr);
        LevelVector as = as_reach_levels(q);
        const ResourceLevel cap(m.capacity);
        for (StateId s = 0; s < q.num_states; ++s) {
            CAPTURE(it);
            CAPTURE(s);
            CHECK(as[s] >= pr[s]);
            CHECK(pr[s] >= sr.safe[s]);
            if (!sr.safe[s].is_infinite()) CHECK(sr.safe[s] <= cap);
            if (!pr[s].is_infinite()) CHECK(pr[s] <= cap);
            if (!as[s].is_infinite()) CHECK(as[s] <= cap);
            if (m.goals.test(s)) {
                CHECK(pr[s] == ResourceLevel(0));
                CHECK(as[s] == ResourceLevel(0));
            }
        }
    }
}

TEST_CASE("solver matches the configuration-graph oracle") {
    Rng rng(20240229);
    int models = 0;
    while (models < 250) {
        ConsumptionPomdp m = random_comdp(rng, 6, 3, 8);
        REQUIRE(validate(m).empty());
        QualComdp q = qualitative_view(m);
        OracleResult oracle = product_oracle(q);

        LevelVector mic = min_init_cons(q);
        SafeResult sr = safe_levels(q);
        LevelVector pr = pos_reach_levels(q, sr);
        LevelVector as = as_reach_levels(q);

        for (StateId s = 0; s < q.num_states; ++s) {
            CAPTURE(models);
            CAPTURE(s);
            CHECK(mic[s] == oracle.reload_attr_min[s]);
            CHECK(sr.safe[s] == oracle.safe_min[s]);
            CHECK(pr[s] == oracle.pos_reach_min[s]);
            CHECK(as[s] == oracle.as_reach_min[s]);
        }
        ++models;
    }
}

TEST_CASE("oracle basics") {
    ConsumptionPomdp m = chain({2}, 5);
    OracleResult oracle = product_oracle(qualitative_view(m));
    // Goal configurations are safe and reaching at every level.
    CHECK(oracle.safe_min[1] == ResourceLevel(0));
    CHECK(oracle.pos_reach_min[1] == ResourceLevel(0));
    CHECK(oracle.as_reach_min[1] == ResourceLevel(0));
    // A state with only an over-consuming action is unsafe below the cost.
    CHECK(oracle.safe_min[0] == ResourceLevel(2));

    // Budget refusal.
    ConsumptionPomdp big = chain({1, 1, 1, 1}, 5);
    CHECK_THROWS(product_oracle(qualitative_view(big), 3));
}

TEST_CASE("zero-consumption survivable set") {
    Rng rng(77);
    for (int it = 0; it < 80; ++it) {
        ConsumptionPomdp m = random_comdp(rng);
        QualComdp q = qualitative_view(m);
        StateSet z = zero_consumption_survivable(q);
        CAPTURE(it);
        // Goals always absorb for free; other members must have a
        // zero-consumption action staying inside the set.
        CHECK(m.goals.is_subset_of(z));
        z.for_each([&](StateId s) {
            bool ok = false;
            for (ActionId a = 0; a < q.num_actions && !ok; ++a) {
                if (q.consumption(s, a) != 0) continue;
                bool all = true;
                for (StateId t : q.successors(s, a)) all = all && z.test(t);
                ok = all;
            }
            CHECK(ok);
        });

        // With every non-goal pair consuming, the set is exactly the goals.
        ConsumptionPomdp strict = m;
        for (StateId s = 0; s < strict.num_states(); ++s)
            if (!strict.goals.test(s))
                for (ActionId a = 0; a < strict.num_actions(); ++a)
                    strict.cons[s][a] = std::max(1, strict.cons[s][a]);
        CHECK(zero_consumption_survivable(qualitative_view(strict)) == strict.goals);
    }
}
