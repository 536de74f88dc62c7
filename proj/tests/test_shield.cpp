#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "copomdp/comdp_oracle.hpp"
#include "copomdp/benchmarks.hpp"
#include "copomdp/model_io.hpp"
#include "copomdp/shield.hpp"
#include "test_helpers.hpp"

using namespace copomdp;
using namespace copomdp::testing;

TEST_CASE("fork fixture: pruning removes the dock reloads, nothing is enabled") {
    const ConsumptionPomdp m = build_infeasible_fork();
    BeliefTracker tracker(m);
    BeliefComdp bc = build_belief_comdp(m, tracker, initial_supports(m, tracker));
    PrunedBeliefComdp pruned = prune(bc);

    // First pass finds the stuck dock guess at infinity and strips the
    // whole dock support of its reload property; afterwards nothing but the
    // finish support can positively reach the goal.
    CHECK(pruned.passes >= 2);
    StateSet docks(m.num_states());
    docks.set(3);
    docks.set(4);
    const std::size_t dock_idx = bc.support_index.at(docks);
    CHECK_FALSE(pruned.final_reloads.test(bc.state_of(dock_idx, 3)));
    CHECK(pruned.support_level[dock_idx].is_infinite());

    StateSet start(m.num_states());
    start.set(0);
    CHECK(pruned.support_level[bc.support_index.at(start)].is_infinite());

    Shield shield = extract(pruned, m, tracker, model_fingerprint(m));
    CHECK(shield.threshold(start, 0).is_infinite());
    CHECK(shield.threshold(start, 1).is_infinite());
    CHECK_FALSE(feasible(shield, m, tracker));
    // Full capacity does not help.
    CHECK(shield.allowed_actions(start, ResourceLevel(m.capacity)).empty());
}

TEST_CASE("threshold semantics") {
    const ConsumptionPomdp m = build_tiger();
    ShieldSynthesis synth = synthesize_shield(m);
    const Shield& shield = synth.shield;
    BeliefTracker tracker(m);
    CHECK(feasible(shield, m, tracker));

    StateSet idle(m.num_states());
    idle.set(0);
    idle.set(1);
    // Listening costs one unit and the pair can always bail out by opening,
    // so the listen threshold is exactly one.
    CHECK(shield.threshold(idle, 0) == ResourceLevel(1));
    CHECK(shield.enabled(idle, ResourceLevel(1), 0));
    CHECK_FALSE(shield.enabled(idle, ResourceLevel(0), 0));
    // Exhausted level disables everything.
    CHECK_FALSE(shield.enabled(idle, ResourceLevel::exhausted(), 1));
    CHECK(shield.allowed_actions(idle, ResourceLevel::exhausted()).empty());
    // Opening consumes nothing and ends the run: always allowed.
    CHECK(shield.threshold(idle, 1) == ResourceLevel(0));
    CHECK(shield.threshold(idle, 2) == ResourceLevel(0));
    // Monotone: anything enabled stays enabled at higher levels.
    for (ActionId a = 0; a < m.num_actions(); ++a)
        for (int l = 1; l <= m.capacity; ++l)
            if (shield.enabled(idle, ResourceLevel(l - 1), a))
                CHECK(shield.enabled(idle, ResourceLevel(l), a));
    // Queries outside the shielded fragment are errors.
    StateSet unknown(m.num_states());
    unknown.set(0);
    unknown.set(7);
    CHECK_THROWS(shield.enabled(unknown, ResourceLevel(5), 0));
}

TEST_CASE("guess irrelevance at the pruning fixed point") {
    Rng rng(101);
    for (int it = 0; it < 60; ++it) {
        const ConsumptionPomdp m = random_copomdp(rng, 5, 2, 6, true);
        BeliefTracker tracker(m);
        BeliefComdp bc = build_belief_comdp(m, tracker, initial_supports(m, tracker));
        PrunedBeliefComdp pruned = prune(bc);
        for (std::size_t bi = 0; bi < bc.supports.size(); ++bi) {
            ResourceLevel common = ResourceLevel::exhausted();
            bool first = true;
            bc.supports[bi].for_each([&](StateId g) {
                const ResourceLevel v = pruned.levels[bc.state_of(bi, g)];
                if (first) {
                    common = v;
                    first = false;
                }
                CAPTURE(it);
                CAPTURE(bi);
                CHECK(v == common);
            });
        }
    }
}

TEST_CASE("identity reduction: thresholds from the observable solver") {
    Rng rng(211);
    for (int it = 0; it < 60; ++it) {
        const ConsumptionPomdp m = random_comdp(rng, 6, 3, 8);
        QualComdp q = qualitative_view(m);
        const LevelVector tlev = as_reach_levels(q);

        BeliefTracker tracker(m);
        std::vector<StateSet> roots;
        for (StateId s = 0; s < m.num_states(); ++s) {
            StateSet b(m.num_states());
            b.set(s);
            roots.push_back(b);
        }
        BeliefComdp bc = build_belief_comdp(m, tracker, roots);
        PrunedBeliefComdp pruned = prune(bc);
        Shield shield = extract(pruned, m, tracker, model_fingerprint(m));

        for (StateId s = 0; s < m.num_states(); ++s) {
            StateSet b(m.num_states());
            b.set(s);
            for (ActionId a = 0; a < m.num_actions(); ++a) {
                ResourceLevel worst(0);
                for (const auto& [t, p] : m.transitions[s][a].entries)
                    if (p > 0 && tlev[t] > worst) worst = tlev[t];
                const ResourceLevel expected = required_level(m, worst, s, a);
                CAPTURE(it);
                CAPTURE(s);
                CAPTURE(a);
                CHECK(shield.threshold(b, a) == expected);
            }
        }
    }
}

TEST_CASE("pruned levels match the oracle on the derived observable model") {
    Rng rng(307);
    for (int it = 0; it < 30; ++it) {
        const ConsumptionPomdp m = random_copomdp(rng, 5, 2, 5, true);
        BeliefTracker tracker(m);
        BeliefComdp bc = build_belief_comdp(m, tracker, initial_supports(m, tracker));
        PrunedBeliefComdp pruned = prune(bc);

        // Feed the pruned reload set back through the oracle: the final
        // positive-reach levels must agree with exact almost-sure values on
        // the pruned model.
        QualComdp q = bc.qual;
        q.reloads = pruned.final_reloads;
        if (q.num_states * static_cast<std::size_t>(q.capacity + 1) > 200000) continue;
        OracleResult oracle = product_oracle(q);
        for (std::size_t i = 0; i < bc.states.size(); ++i) {
            if (bc.states[i].guess == kNoGuess) continue;
            CAPTURE(it);
            CAPTURE(i);
            CHECK(pruned.levels[i] == oracle.as_reach_min[i]);
        }
    }
}

TEST_CASE("shielded reachability is closed") {
    // Walk every (support, level) pair reachable under enabled actions;
    // each visited pair must keep at least one action enabled until a goal
    // support is reached.
    for (const ConsumptionPomdp& m : {build_tiger(), build_infeasible_fork()}) {
        BeliefTracker tracker(m);
        ShieldSynthesis synth = synthesize_shield(m);
        const Shield& shield = synth.shield;

        struct Key {
            std::set<StateId> support;
            int level;
            bool operator<(const Key& o) const {
                return std::tie(support, level) < std::tie(o.support, o.level);
            }
        };
        std::set<Key> seen;
        std::vector<BeliefNode> work;
        for (const StateSet& b : initial_supports(m, tracker)) {
            if (shield.allowed_actions(b, ResourceLevel(m.init_level)).empty()) continue;
            work.push_back({b, ResourceLevel(m.init_level)});
            seen.insert({to_set(b), m.init_level});
        }
        while (!work.empty()) {
            BeliefNode node = work.back();
            work.pop_back();
            if (node.support.is_subset_of(m.goals)) continue;
            const auto allowed = shield.allowed_actions(node.support, node.level);
            CHECK_FALSE(allowed.empty());
            for (ActionId a : allowed) {
                const StateId member = node.support.first();
                const ResourceLevel nl = next_level(m, node.level, member, a);
                REQUIRE_FALSE(nl.is_exhausted());
                for (const StateSet& b : tracker.support_successors(node.support, a)) {
                    Key k{to_set(b), nl.amount()};
                    if (seen.insert(k).second) work.push_back({b, nl});
                }
            }
        }
    }
}

TEST_CASE("shield file round-trip and integrity checks") {
    const ConsumptionPomdp m = build_tiger();
    ShieldSynthesis synth = synthesize_shield(m);
    const std::string dir = std::filesystem::temp_directory_path().string();
    const std::string path = dir + "/tiger_shield_test.json";
    save_shield(synth.shield, path);

    Shield loaded = load_shield(path, m);
    CHECK(loaded.num_supports() == synth.shield.num_supports());
    for (const auto& [support, row] : synth.shield.table())
        for (ActionId a = 0; a < row.size(); ++a) CHECK(loaded.threshold(support, a) == row[a]);

    // Fingerprint mismatch against a different model.
    const ConsumptionPomdp other = build_infeasible_fork();
    CHECK_THROWS(load_shield(path, other));

    // Truncated file is a format error.
    {
        std::ifstream in(path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out(path);
        out << text.substr(0, text.size() / 2);
    }
    CHECK_THROWS(load_shield(path, m));
    std::filesystem::remove(path);
}
