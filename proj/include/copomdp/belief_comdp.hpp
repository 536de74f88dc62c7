#pragma once

#include <limits>
#include <unordered_map>
#include <vector>

#include "copomdp/belief.hpp"
#include "copomdp/qual_comdp.hpp"

namespace copomdp {

/// Marker for an invalidated guess of the hidden state.
inline constexpr StateId kNoGuess = std::numeric_limits<StateId>::max();

/// One state of the derived observable model: a belief support together
/// with a guess of the hidden state (a member of the support, or invalid).
struct GuessedBelief {
    std::size_t support_index;
    StateId guess;  // kNoGuess or a member of the support
};

/// Fully observable consumption MDP over (support, guess) pairs, built for
/// a consumption-consistent model. Consumption is inherited from any support
/// member (equal by consistency), a pair reloads when the whole support
/// does, and a pair is a goal exactly when its guess is a goal state.
/// Successor sets carry an implied uniform distribution.
struct BeliefComdp {
    std::vector<StateSet> supports;             // distinct reachable supports
    std::vector<GuessedBelief> states;          // all (support, guess) pairs
    std::vector<std::size_t> support_base;      // first state index per support
    std::unordered_map<StateSet, std::size_t, StateSetHash> support_index;
    QualComdp qual;                             // solver view over `states`

    std::size_t state_of(std::size_t support_idx, StateId guess) const;
    /// Representative non-invalid guess state of a support.
    std::size_t representative(std::size_t support_idx) const;
};

/// Successor pairs of (B, guess) under a: supports follow the one-step
/// support successors of B; the guess moves to each of its own successors
/// that landed inside the new support, or is invalidated when none did.
std::vector<GuessedBelief> guess_successors(const BeliefTracker& tracker, const BeliefComdp& bc,
                                            std::size_t state, ActionId a);

/// Builds the reachable fragment: supports are closed under one-step
/// successors starting from the roots, and every reachable support
/// contributes all of its guess variants. Throws when the state count
/// exceeds `max_states`.
BeliefComdp build_belief_comdp(const ConsumptionPomdp& model, const BeliefTracker& tracker,
                               const std::vector<StateSet>& roots,
                               std::size_t max_states = 2000000);

/// Every (B, guess != invalid) has, under every action, at least one
/// successor whose guess is still valid. Construction sanity check used by
/// the test suites.
bool has_valid_guess_successor(const BeliefTracker& tracker, const BeliefComdp& bc,
                               std::size_t state, ActionId a);

}  // namespace copomdp
