#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "copomdp/belief_comdp.hpp"
#include "copomdp/comdp_solver.hpp"
#include "copomdp/model.hpp"

namespace copomdp {

/// Per-(support, action) threshold table. An action is enabled in a history
/// exactly when the current level is a concrete amount at least the
/// threshold of the history's belief support.
class Shield {
public:
    Shield() = default;
    Shield(std::string fingerprint, int capacity, std::size_t num_actions)
        : fingerprint_(std::move(fingerprint)), capacity_(capacity), num_actions_(num_actions) {}

    const std::string& fingerprint() const { return fingerprint_; }
    int capacity() const { return capacity_; }
    std::size_t num_actions() const { return num_actions_; }

    void set_thresholds(const StateSet& support, std::vector<ResourceLevel> per_action);
    bool knows(const StateSet& support) const { return thresholds_.count(support) > 0; }
    std::size_t num_supports() const { return thresholds_.size(); }

    /// Threshold for (support, action); throws on a support outside the
    /// shielded fragment (such a history indicates a bug upstream).
    ResourceLevel threshold(const StateSet& support, ActionId a) const;

    bool enabled(const StateSet& support, ResourceLevel level, ActionId a) const;
    std::vector<ActionId> allowed_actions(const StateSet& support, ResourceLevel level) const;

    const std::unordered_map<StateSet, std::vector<ResourceLevel>, StateSetHash>& table() const {
        return thresholds_;
    }

private:
    std::string fingerprint_;
    int capacity_ = 0;
    std::size_t num_actions_ = 0;
    std::unordered_map<StateSet, std::vector<ResourceLevel>, StateSetHash> thresholds_;
};

/// Result of the reload-pruning fixed point on a guess-augmented belief
/// CoMDP: the surviving reload set, the final positive-reach levels, and the
/// per-support common value (equal across valid guesses at the fixed point).
struct PrunedBeliefComdp {
    const BeliefComdp* comdp;
    StateSet final_reloads;     // over comdp states
    LevelVector levels;         // per comdp state
    LevelVector support_level;  // per support index
    std::size_t passes = 0;
};

/// Repeatedly computes positive-reach levels and removes the reload property
/// from every support with an infinitely-valued valid guess, until stable.
PrunedBeliefComdp prune(const BeliefComdp& comdp);

/// Threshold extraction: for every reachable support and action, the worst
/// member's requirement to cover the worst one-step successor support.
Shield extract(const PrunedBeliefComdp& pruned, const ConsumptionPomdp& model,
               const BeliefTracker& tracker, const std::string& fingerprint);

/// Distinct length-0 belief supports, one per initial observation with
/// positive probability.
std::vector<StateSet> initial_supports(const ConsumptionPomdp& model,
                                       const BeliefTracker& tracker);

struct ShieldSynthesis {
    Shield shield;
    std::size_t supports = 0;
    std::size_t comdp_states = 0;
    std::size_t prune_passes = 0;
    double seconds = 0;
};

/// Full pipeline for a consumption-consistent model: initial supports,
/// reachable guess CoMDP, pruning fixed point, extraction.
ShieldSynthesis synthesize_shield(const ConsumptionPomdp& consistent_model,
                                  std::size_t max_comdp_states = 2000000);

/// True when every possible initial observation leaves at least one enabled
/// action at the initial level.
bool feasible(const Shield& shield, const ConsumptionPomdp& model, const BeliefTracker& tracker);

void save_shield(const Shield& shield, const std::string& path);

/// Loads and verifies the stored fingerprint against the given model.
Shield load_shield(const std::string& path, const ConsumptionPomdp& model);

}  // namespace copomdp
