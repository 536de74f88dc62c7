#pragma once

#include <optional>
#include <string>
#include <vector>

#include "copomdp/benchmarks.hpp"
#include "copomdp/planner.hpp"
#include "copomdp/shield.hpp"

namespace copomdp {

enum class BenchmarkId { kTigerSimple, kTigerFuzzy, kUuv, kFile };

/// Hyperparameters used for each benchmark's reported runs.
PlannerConfig default_planner_config(BenchmarkId id, int uuv_size = 8);

struct ExperimentConfig {
    BenchmarkId benchmark = BenchmarkId::kFile;
    int uuv_size = 8;
    std::string model_path;             // used when benchmark == kFile
    double goal_entry_cost = 0.0;       // file models only; benchmarks set their own
    double breakdown_step_cost = 0.0;   // file models only
    PlannerConfig planner;
    bool shielded = true;
    int episodes = 100;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir;                // empty: keep results in memory only
};

struct SummaryRow {
    std::size_t num_states = 0;
    std::size_t num_obs = 0;
    double survival_pct = 0;
    double hit_pct = 0;
    double mean_cost = 0;
    double std_cost = 0;
    double mean_decision_s = 0;
    double std_decision_s = 0;
    double shield_seconds = 0;  // zero in unshielded mode
};

struct ExperimentOutput {
    SummaryRow row;
    std::vector<EpisodeResult> episodes;
    std::vector<std::uint64_t> episode_seeds;
};

/// Builds or loads the model, makes it consumption-consistent, synthesizes
/// the shield in shielded mode (timed), runs the episodes with per-episode
/// derived seeds, and aggregates the summary statistics. Shielded runs with
/// any exhausted episode throw: survival below 100% there is a defect, not
/// a statistic. Writes summary.csv, episodes.jsonl and shield.json under
/// out_dir when set.
ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Deterministic JSON-lines encoding of the episode records (wall times are
/// deliberately excluded so reruns are byte-identical).
std::string episodes_to_jsonl(const ExperimentOutput& out);

std::string summary_to_csv(const SummaryRow& row);

struct DeltaReport {
    double survival_delta = 0;  // first minus second, percentage points
    double hit_delta = 0;
    double cost_delta = 0;
};

DeltaReport compare(const SummaryRow& shielded, const SummaryRow& unshielded);

}  // namespace copomdp
