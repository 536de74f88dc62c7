#include "doctest.h"

#include "copomdp/benchmarks.hpp"
#include "copomdp/model.hpp"
#include "copomdp/model_io.hpp"
#include "test_helpers.hpp"

using namespace copomdp;

namespace {

// Two-state model with one reload, handy for level arithmetic checks.
ConsumptionPomdp tiny(int cons, bool reload, int cap) {
    ConsumptionPomdp m;
    m.state_names = {"s", "g"};
    m.action_names = {"a"};
    m.transitions = {{Distribution{{{1, 1.0}}}}, {Distribution{{{1, 1.0}}}}};
    m.cons = {{cons}, {0}};
    m.cost = {{1.0}, {0.0}};
    m.reloads = StateSet(2);
    if (reload) m.reloads.set(0);
    m.goals = StateSet(2);
    m.goals.set(1);
    m.capacity = cap;
    m.init_distr = Distribution{{{0, 1.0}}};
    m.init_level = cap;
    return with_identity_observations(std::move(m));
}

}  // namespace

TEST_CASE("level update") {
    auto m = tiny(2, false, 10);
    auto r = tiny(2, true, 10);
    CHECK(next_level(m, ResourceLevel::exhausted(), 0, 0) == ResourceLevel::exhausted());
    CHECK(next_level(m, ResourceLevel(5), 0, 0) == ResourceLevel(3));
    CHECK(next_level(r, ResourceLevel(1), 0, 0) == ResourceLevel(8));
    CHECK(next_level(m, ResourceLevel(1), 0, 0) == ResourceLevel::exhausted());
}

TEST_CASE("level requirement") {
    auto m = tiny(2, false, 10);
    auto r = tiny(2, true, 10);
    CHECK(required_level(m, ResourceLevel::exhausted(), 0, 0) == ResourceLevel::exhausted());
    CHECK(required_level(m, ResourceLevel(3), 0, 0) == ResourceLevel(5));
    CHECK(required_level(r, ResourceLevel(3), 0, 0) == ResourceLevel(0));
    CHECK(required_level(m, ResourceLevel(9), 0, 0) == ResourceLevel::infinite());
    CHECK(required_level(m, ResourceLevel::infinite(), 0, 0) == ResourceLevel::infinite());
}

TEST_CASE("update/requirement adjoint relation") {
    Rng rng(7);
    for (int it = 0; it < 200; ++it) {
        const int cap = 1 + static_cast<int>(rng.uniform_index(10));
        const int cons = static_cast<int>(rng.uniform_index(cap + 2));
        const bool reload = rng.bernoulli(0.5);
        auto m = tiny(cons, reload, cap);
        for (int target = 0; target <= cap; ++target) {
            const ResourceLevel need = required_level(m, ResourceLevel(target), 0, 0);
            if (!need.is_infinite())
                CHECK(next_level(m, need, 0, 0) >= ResourceLevel(target));
        }
        for (int level = 0; level <= cap; ++level) {
            const ResourceLevel after = next_level(m, ResourceLevel(level), 0, 0);
            if (!after.is_exhausted() && !reload)
                CHECK(required_level(m, after, 0, 0) <= ResourceLevel(level));
            // Monotone in the level argument.
            if (level > 0)
                CHECK(next_level(m, ResourceLevel(level), 0, 0) >=
                      next_level(m, ResourceLevel(level - 1), 0, 0));
        }
    }
}

TEST_CASE("lookalike is support intersection") {
    ConsumptionPomdp m = build_infeasible_fork();
    CHECK(lookalike(m, 1, 2));   // both corridors read the same
    CHECK(lookalike(m, 3, 4));   // both docks read the same
    CHECK_FALSE(lookalike(m, 0, 1));
    CHECK(lookalike(m, 0, 0));
}

TEST_CASE("validation accepts the shipped models") {
    CHECK(validate(build_infeasible_fork()).empty());
    CHECK(validate(build_tiger()).empty());
    CHECK(validate(build_uuv(default_uuv_params(8))).empty());
}

TEST_CASE("validation flags zero-consumption cycles") {
    auto m = tiny(0, false, 5);
    m.goals = StateSet(2);  // no goals: the zero self-loop on g is now a violation
    m.cons = {{0}, {0}};
    auto issues = validate(m);
    bool found = false;
    for (const auto& i : issues) found = found || i.code == "zero-cycle";
    CHECK(found);
}

TEST_CASE("validation flags reload/non-reload lookalikes") {
    ConsumptionPomdp m = build_infeasible_fork();
    m.reloads.reset(4);  // dock_b loses the reload property but keeps the shared reading
    auto issues = validate(m);
    bool found = false;
    for (const auto& i : issues) found = found || i.code == "reload-lookalike";
    CHECK(found);
}

TEST_CASE("validation flags misplaced negative costs") {
    ConsumptionPomdp m = build_infeasible_fork();
    m.cost[0][0] = -5.0;  // start's successors are the corridors, not goals
    auto issues = validate(m);
    bool found = false;
    for (const auto& i : issues) found = found || i.code == "negative-cost";
    CHECK(found);
}

TEST_CASE("model json round-trip") {
    for (const ConsumptionPomdp& m :
         {build_infeasible_fork(), build_tiger(), build_uuv(default_uuv_params(8))}) {
        const std::string text = to_json(m);
        const ConsumptionPomdp back = from_json(text);
        CHECK(back.state_names == m.state_names);
        CHECK(back.obs_names == m.obs_names);
        CHECK(back.cons == m.cons);
        CHECK(back.cost == m.cost);
        CHECK(back.reloads == m.reloads);
        CHECK(back.goals == m.goals);
        CHECK(back.capacity == m.capacity);
        CHECK(back.init_level == m.init_level);
        CHECK(to_json(back) == text);
        CHECK(model_fingerprint(back) == model_fingerprint(m));
    }
}

TEST_CASE("loader rejects malformed input") {
    const ConsumptionPomdp m = build_infeasible_fork();
    std::string text = to_json(m);
    CHECK_THROWS(from_json("{"));
    CHECK_THROWS(from_json("[]"));
    // Unknown top-level key.
    std::string extra = text;
    extra.replace(extra.find('{'), 1, "{\"extra_key\": 1,");
    CHECK_THROWS(from_json(extra));
    // Probabilities that do not sum to one pass parsing but fail validation.
    ConsumptionPomdp broken = m;
    broken.transitions[0][0].entries[0].second = 0.4;
    const ConsumptionPomdp reparsed = from_json(to_json(broken));
    CHECK_FALSE(validate(reparsed).empty());
}

TEST_CASE("validation accepts random generated models") {
    Rng rng(11);
    for (int it = 0; it < 100; ++it) {
        auto m = testing::random_comdp(rng);
        CAPTURE(it);
        CHECK(validate(m).empty());
    }
    for (int it = 0; it < 100; ++it) {
        auto m = testing::random_copomdp(rng);
        CAPTURE(it);
        CHECK(validate(m).empty());
    }
}
