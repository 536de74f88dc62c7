#include "copomdp/belief_comdp.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace copomdp {

std::size_t BeliefComdp::state_of(std::size_t support_idx, StateId guess) const {
    // States are laid out per support: members in increasing order, then the
    // invalid-guess variant.
    const std::size_t base = support_base[support_idx];
    const StateSet& B = supports[support_idx];
    if (guess == kNoGuess) return base + B.count();
    if (!B.test(guess)) throw std::logic_error("state_of: guess is not a member of the support");
    return base + B.rank(guess);
}

std::size_t BeliefComdp::representative(std::size_t support_idx) const {
    return state_of(support_idx, supports[support_idx].first());
}

std::vector<GuessedBelief> guess_successors(const BeliefTracker& tracker, const BeliefComdp& bc,
                                            std::size_t state, ActionId a) {
    const GuessedBelief& gb = bc.states[state];
    const StateSet& B = bc.supports[gb.support_index];
    std::vector<GuessedBelief> out;
    for (const StateSet& next : tracker.support_successors(B, a)) {
        auto it = bc.support_index.find(next);
        if (it == bc.support_index.end())
            throw std::logic_error("guess_successors: successor support not in the closure");
        const std::size_t ni = it->second;
        if (gb.guess == kNoGuess) {
            out.push_back({ni, kNoGuess});
            continue;
        }
        StateSet moved = tracker.successor_mask(gb.guess, a) & next;
        if (moved.empty()) {
            out.push_back({ni, kNoGuess});
        } else {
            moved.for_each([&](StateId t) { out.push_back({ni, t}); });
        }
    }
    return out;
}

bool has_valid_guess_successor(const BeliefTracker& tracker, const BeliefComdp& bc,
                               std::size_t state, ActionId a) {
    for (const GuessedBelief& gb : guess_successors(tracker, bc, state, a))
        if (gb.guess != kNoGuess) return true;
    return false;
}

BeliefComdp build_belief_comdp(const ConsumptionPomdp& model, const BeliefTracker& tracker,
                               const std::vector<StateSet>& roots, std::size_t max_states) {
    BeliefComdp bc;

    // Close the support set under one-step successors.
    std::vector<std::size_t> frontier;
    auto add_support = [&](const StateSet& B) {
        auto it = bc.support_index.find(B);
        if (it != bc.support_index.end()) return it->second;
        const std::size_t idx = bc.supports.size();
        bc.supports.push_back(B);
        bc.support_index.emplace(B, idx);
        frontier.push_back(idx);
        return idx;
    };
    for (const StateSet& B : roots) {
        if (B.empty()) throw std::invalid_argument("build_belief_comdp: empty root support");
        add_support(B);
    }
    std::size_t total_states = 0;
    while (!frontier.empty()) {
        const std::size_t bi = frontier.back();
        frontier.pop_back();
        total_states += bc.supports[bi].count() + 1;
        if (total_states > max_states)
            throw std::runtime_error(
                "build_belief_comdp: state count exceeds the configured bound (" +
                std::to_string(max_states) + ")");
        const StateSet B = bc.supports[bi];  // copy: supports may reallocate
        for (ActionId a = 0; a < model.num_actions(); ++a)
            for (const StateSet& next : tracker.support_successors(B, a)) add_support(next);
    }

    // All guess variants of every reachable support.
    for (std::size_t bi = 0; bi < bc.supports.size(); ++bi) {
        bc.support_base.push_back(bc.states.size());
        bc.supports[bi].for_each(
            [&](StateId s) { bc.states.push_back({bi, s}); });
        bc.states.push_back({bi, kNoGuess});
    }

    // Solver view. Consumption must agree across the support: consistency.
    QualComdp& q = bc.qual;
    q.num_states = bc.states.size();
    q.num_actions = model.num_actions();
    q.capacity = model.capacity;
    q.reloads = StateSet(q.num_states);
    q.goals = StateSet(q.num_states);
    q.succ_offsets.push_back(0);
    for (std::size_t i = 0; i < bc.states.size(); ++i) {
        const GuessedBelief& gb = bc.states[i];
        const StateSet& B = bc.supports[gb.support_index];
        const StateId member = B.first();
        if (B.is_subset_of(model.reloads)) q.reloads.set(i);
        if (gb.guess != kNoGuess && model.is_goal(gb.guess)) q.goals.set(i);
        for (ActionId a = 0; a < q.num_actions; ++a) {
#ifndef NDEBUG
            B.for_each([&](StateId s) { assert(model.cons[s][a] == model.cons[member][a]); });
#endif
            q.cons.push_back(model.cons[member][a]);
            std::vector<StateId> targets;
            for (const GuessedBelief& succ : guess_successors(tracker, bc, i, a))
                targets.push_back(bc.state_of(succ.support_index, succ.guess));
            std::sort(targets.begin(), targets.end());
            targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
            for (StateId t : targets) q.succ_targets.push_back(t);
            q.succ_offsets.push_back(q.succ_targets.size());
        }
    }
    return bc;
}

}  // namespace copomdp
