#pragma once

#include <string>

#include "copomdp/model.hpp"

namespace copomdp {

/// Model file format. Top-level keys (no others accepted):
///   states, actions, observations   -- arrays of names
///   transitions  -- array of {state, action, dist: [[state, prob], ...]}
///   obs_fn       -- array of {state, dist: [[obs, prob], ...]}
///   cons, cost   -- per-state rows, one value per action
///   reloads, goals -- arrays of state indices
///   capacity     -- positive integer
///   init_distr   -- [[state, prob], ...]
///   init_level   -- integer in [0, capacity]
std::string to_json(const ConsumptionPomdp& model);
ConsumptionPomdp from_json(const std::string& text);

void save_model(const ConsumptionPomdp& model, const std::string& path);
ConsumptionPomdp load_model(const std::string& path);

/// FNV-1a hash of the model's canonical JSON serialization, as a hex string.
/// Shield files store this to detect model/shield mismatches.
std::string model_fingerprint(const ConsumptionPomdp& model);

}  // namespace copomdp
