#include "copomdp/shield.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "copomdp/model_io.hpp"
#include "json.hpp"

namespace copomdp {

void Shield::set_thresholds(const StateSet& support, std::vector<ResourceLevel> per_action) {
    if (per_action.size() != num_actions_)
        throw std::invalid_argument("set_thresholds: one threshold per action required");
    thresholds_[support] = std::move(per_action);
}

ResourceLevel Shield::threshold(const StateSet& support, ActionId a) const {
    auto it = thresholds_.find(support);
    if (it == thresholds_.end())
        throw std::runtime_error("shield: belief support outside the shielded fragment");
    return it->second.at(a);
}

bool Shield::enabled(const StateSet& support, ResourceLevel level, ActionId a) const {
    if (!level.is_amount()) return false;
    return level >= threshold(support, a);
}

std::vector<ActionId> Shield::allowed_actions(const StateSet& support,
                                              ResourceLevel level) const {
    std::vector<ActionId> out;
    if (!level.is_amount()) return out;
    auto it = thresholds_.find(support);
    if (it == thresholds_.end())
        throw std::runtime_error("shield: belief support outside the shielded fragment");
    for (ActionId a = 0; a < num_actions_; ++a)
        if (level >= it->second[a]) out.push_back(a);
    return out;
}

PrunedBeliefComdp prune(const BeliefComdp& comdp) {
    PrunedBeliefComdp out;
    out.comdp = &comdp;
    out.final_reloads = comdp.qual.reloads;

    for (;;) {
        ++out.passes;
        SafeResult sr = safe_levels(comdp.qual, out.final_reloads);
        out.levels = pos_reach_levels(comdp.qual, sr);

        // A reload support with an infinitely-valued valid guess is a trap:
        // drop the reload property from the whole support, invalid guess
        // included.
        std::vector<std::size_t> dead_supports;
        for (std::size_t i = 0; i < comdp.states.size(); ++i) {
            const GuessedBelief& gb = comdp.states[i];
            if (gb.guess == kNoGuess) continue;
            if (!out.final_reloads.test(i)) continue;
            if (out.levels[i].is_infinite()) dead_supports.push_back(gb.support_index);
        }
        if (dead_supports.empty()) break;
        for (std::size_t bi : dead_supports) {
            const std::size_t base = comdp.support_base[bi];
            const std::size_t span = comdp.supports[bi].count() + 1;
            for (std::size_t i = base; i < base + span; ++i) out.final_reloads.reset(i);
        }
    }

    out.support_level.reserve(comdp.supports.size());
    for (std::size_t bi = 0; bi < comdp.supports.size(); ++bi)
        out.support_level.push_back(out.levels[comdp.representative(bi)]);
    return out;
}

Shield extract(const PrunedBeliefComdp& pruned, const ConsumptionPomdp& model,
               const BeliefTracker& tracker, const std::string& fingerprint) {
    const BeliefComdp& bc = *pruned.comdp;
    Shield shield(fingerprint, model.capacity, model.num_actions());
    for (std::size_t bi = 0; bi < bc.supports.size(); ++bi) {
        const StateSet& B = bc.supports[bi];
        std::vector<ResourceLevel> row;
        row.reserve(model.num_actions());
        for (ActionId a = 0; a < model.num_actions(); ++a) {
            ResourceLevel worst = ResourceLevel::exhausted();
            B.for_each([&](StateId s) {
                ResourceLevel member_worst = ResourceLevel::exhausted();
                for (const StateSet& next : tracker.support_successors(B, a, s)) {
                    auto it = bc.support_index.find(next);
                    if (it == bc.support_index.end())
                        throw std::logic_error("extract: successor support missing from closure");
                    ResourceLevel v = pruned.support_level[it->second];
                    if (v > member_worst) member_worst = v;
                }
                ResourceLevel need = required_level(model, member_worst, s, a);
                if (need > worst) worst = need;
            });
            row.push_back(worst);
        }
        shield.set_thresholds(B, std::move(row));
    }
    return shield;
}

std::vector<StateSet> initial_supports(const ConsumptionPomdp& model,
                                       const BeliefTracker& tracker) {
    StateSet possible_obs(model.num_obs());
    for (const auto& [s, p] : model.init_distr.entries)
        if (p > 0)
            for (const auto& [o, q] : model.obs_fn[s].entries)
                if (q > 0) possible_obs.set(o);
    std::vector<StateSet> out;
    possible_obs.for_each([&](ObsId o) {
        StateSet b = tracker.initial_support(o);
        if (b.empty()) return;
        for (const StateSet& seen : out)
            if (seen == b) return;
        out.push_back(std::move(b));
    });
    return out;
}

ShieldSynthesis synthesize_shield(const ConsumptionPomdp& model, std::size_t max_comdp_states) {
    if (!is_consistent(model))
        throw std::invalid_argument("synthesize_shield: model must be consumption-consistent");
    const auto t0 = std::chrono::steady_clock::now();
    BeliefTracker tracker(model);
    const std::vector<StateSet> roots = initial_supports(model, tracker);
    if (roots.empty())
        throw std::runtime_error("synthesize_shield: no initial observation is possible");
    BeliefComdp comdp = build_belief_comdp(model, tracker, roots, max_comdp_states);
    PrunedBeliefComdp pruned = prune(comdp);
    ShieldSynthesis out;
    out.shield = extract(pruned, model, tracker, model_fingerprint(model));
    out.supports = comdp.supports.size();
    out.comdp_states = comdp.states.size();
    out.prune_passes = pruned.passes;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

bool feasible(const Shield& shield, const ConsumptionPomdp& model, const BeliefTracker& tracker) {
    const ResourceLevel init(model.init_level);
    for (const StateSet& b : initial_supports(model, tracker))
        if (shield.allowed_actions(b, init).empty()) return false;
    return true;
}

void save_shield(const Shield& shield, const std::string& path) {
    nlohmann::json j;
    j["fingerprint"] = shield.fingerprint();
    j["capacity"] = shield.capacity();
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [support, row] : shield.table())
        for (ActionId a = 0; a < row.size(); ++a) {
            nlohmann::json entry;
            entry["support"] = support.to_indices();
            entry["action"] = a;
            if (row[a].is_infinite())
                entry["tau"] = "inf";
            else
                entry["tau"] = row[a].amount();
            rows.push_back(entry);
        }
    j["thresholds"] = rows;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

Shield load_shield(const std::string& path, const ConsumptionPomdp& model) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("shield file: malformed JSON: " + std::string(e.what()));
    }
    if (!j.is_object() || !j.contains("fingerprint") || !j.contains("capacity") ||
        !j.contains("thresholds"))
        throw std::runtime_error("shield file: missing fingerprint/capacity/thresholds");

    const std::string fp = j["fingerprint"].get<std::string>();
    if (fp != model_fingerprint(model))
        throw std::runtime_error("shield file: fingerprint does not match the model");
    const int capacity = j["capacity"].get<int>();
    if (capacity != model.capacity)
        throw std::runtime_error("shield file: capacity does not match the model");

    Shield shield(fp, capacity, model.num_actions());
    std::unordered_map<StateSet, std::vector<ResourceLevel>, StateSetHash> table;
    for (const auto& entry : j["thresholds"]) {
        StateSet support(model.num_states());
        for (const auto& e : entry.at("support")) {
            StateId s = e.get<StateId>();
            if (s >= model.num_states())
                throw std::runtime_error("shield file: support state out of range");
            support.set(s);
        }
        ActionId a = entry.at("action").get<ActionId>();
        if (a >= model.num_actions())
            throw std::runtime_error("shield file: action out of range");
        ResourceLevel tau = ResourceLevel::infinite();
        if (entry.at("tau").is_number_integer()) {
            const int v = entry.at("tau").get<int>();
            if (v < 0) throw std::runtime_error("shield file: negative threshold");
            tau = ResourceLevel(v);
        } else if (entry.at("tau") != "inf") {
            throw std::runtime_error("shield file: tau must be an integer or \"inf\"");
        }
        auto& row = table.try_emplace(support, model.num_actions(), ResourceLevel::infinite())
                        .first->second;
        row[a] = tau;
    }
    for (auto& [support, row] : table) shield.set_thresholds(support, std::move(row));
    return shield;
}

}  // namespace copomdp
