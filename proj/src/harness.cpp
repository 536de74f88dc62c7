#include "copomdp/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "copomdp/consistency.hpp"
#include "copomdp/model_io.hpp"

namespace copomdp {

namespace {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    // splitmix64 over base + index keeps per-episode streams independent.
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct MeanStd {
    double mean = 0;
    double std_dev = 0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty()) return out;
    for (double x : xs) out.mean += x;
    out.mean /= xs.size();
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.std_dev = std::sqrt(ss / (xs.size() - 1));
    }
    return out;
}

}  // namespace

PlannerConfig default_planner_config(BenchmarkId id, int uuv_size) {
    PlannerConfig c;
    switch (id) {
        case BenchmarkId::kTigerSimple:
        case BenchmarkId::kTigerFuzzy:
            c.exploration = 1.0;
            c.horizon = 500;
            c.simulations = 100;
            c.rollout = RolloutKind::kUniform;
            break;
        case BenchmarkId::kUuv:
            c.horizon = 100;
            c.simulations = 1000;
            c.rollout = RolloutKind::kHeavy;
            if (uuv_size <= 8)
                c.exploration = 25.0;
            else if (uuv_size <= 12)
                c.exploration = 50.0;
            else
                c.exploration = 200.0;
            break;
        case BenchmarkId::kFile:
            break;
    }
    return c;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
    if (config.episodes < 1) throw std::invalid_argument("run_experiment: episodes must be >= 1");

    ConsumptionPomdp model;
    double goal_entry = config.goal_entry_cost;
    double breakdown_step = config.breakdown_step_cost;
    switch (config.benchmark) {
        case BenchmarkId::kTigerSimple: {
            TigerParams p;
            model = build_tiger(p);
            goal_entry = 0.0;
            breakdown_step = p.step_cost;
            break;
        }
        case BenchmarkId::kTigerFuzzy: {
            TigerParams p;
            p.p_correct = 0.6;
            model = build_tiger(p);
            goal_entry = 0.0;
            breakdown_step = p.step_cost;
            break;
        }
        case BenchmarkId::kUuv: {
            UuvParams p = default_uuv_params(config.uuv_size);
            model = build_uuv(p);
            goal_entry = p.goal_entry_cost;
            breakdown_step = p.step_cost;
            break;
        }
        case BenchmarkId::kFile:
            model = load_model(config.model_path);
            break;
    }
    validate_or_throw(model);
    ConsistentModel consistent = make_consistent(model);
    const ConsumptionPomdp& m = consistent.model;

    GenerativeEnv env(m, goal_entry, breakdown_step);
    BeliefTracker tracker(m);

    ExperimentOutput output;
    output.row.num_states = m.num_states();
    output.row.num_obs = m.num_obs();

    Shield shield;
    if (config.shielded) {
        ShieldSynthesis synth = synthesize_shield(m);
        shield = std::move(synth.shield);
        output.row.shield_seconds = synth.seconds;
        if (!feasible(shield, m, tracker)) {
            std::ostringstream os;
            os << "run_experiment: no safe goal policy exists from the initial situation;";
            os << " initial supports and thresholds:";
            for (const StateSet& b : initial_supports(m, tracker)) {
                os << " {";
                b.for_each([&](StateId s) { os << " " << m.state_names[s]; });
                os << " }:";
                for (ActionId a = 0; a < m.num_actions(); ++a)
                    os << " " << m.action_names[a] << "=" << shield.threshold(b, a).to_string();
            }
            throw std::runtime_error(os.str());
        }
    }

    output.episodes.assign(config.episodes, EpisodeResult{});
    output.episode_seeds.assign(config.episodes, 0);
    for (int i = 0; i < config.episodes; ++i)
        output.episode_seeds[i] = derive_seed(config.seed, static_cast<std::uint64_t>(i));

    const Shield* shield_ptr = config.shielded ? &shield : nullptr;
    const int threads = std::max(1, config.threads);
    auto worker = [&](int offset) {
        for (int i = offset; i < config.episodes; i += threads)
            output.episodes[i] =
                run_episode(env, tracker, shield_ptr, config.planner, output.episode_seeds[i]);
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    int survived = 0, hits = 0;
    std::vector<double> costs;
    std::vector<double> decision_times;
    for (const EpisodeResult& e : output.episodes) {
        survived += e.survived ? 1 : 0;
        hits += e.goal_hit ? 1 : 0;
        costs.push_back(e.total_cost);
        for (double d : e.decision_seconds) decision_times.push_back(d);
    }
    output.row.survival_pct = 100.0 * survived / config.episodes;
    output.row.hit_pct = 100.0 * hits / config.episodes;
    const MeanStd cost_stats = mean_std(costs);
    output.row.mean_cost = cost_stats.mean;
    output.row.std_cost = cost_stats.std_dev;
    const MeanStd time_stats = mean_std(decision_times);
    output.row.mean_decision_s = time_stats.mean;
    output.row.std_decision_s = time_stats.std_dev;

    if (config.shielded && survived != config.episodes)
        throw std::runtime_error("run_experiment: a shielded episode exhausted the resource");

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::ofstream csv(config.out_dir + "/summary.csv");
        csv << summary_to_csv(output.row);
        std::ofstream jsonl(config.out_dir + "/episodes.jsonl");
        jsonl << episodes_to_jsonl(output);
        if (config.shielded) save_shield(shield, config.out_dir + "/shield.json");
    }
    return output;
}

std::string episodes_to_jsonl(const ExperimentOutput& out) {
    std::ostringstream os;
    for (std::size_t i = 0; i < out.episodes.size(); ++i) {
        const EpisodeResult& e = out.episodes[i];
        os << "{\"episode\":" << i << ",\"seed\":" << out.episode_seeds[i]
           << ",\"survived\":" << (e.survived ? "true" : "false")
           << ",\"goal\":" << (e.goal_hit ? "true" : "false") << ",\"cost\":" << fmt(e.total_cost)
           << ",\"steps\":" << e.steps << "}\n";
    }
    return os.str();
}

std::string summary_to_csv(const SummaryRow& r) {
    std::ostringstream os;
    os << "states,obs,survival_pct,hit_pct,mean_cost,std_cost,mean_decision_s,std_decision_s,"
          "shield_s\n";
    os << r.num_states << "," << r.num_obs << "," << fmt(r.survival_pct) << ","
       << fmt(r.hit_pct) << "," << fmt(r.mean_cost) << "," << fmt(r.std_cost) << ","
       << fmt(r.mean_decision_s) << "," << fmt(r.std_decision_s) << "," << fmt(r.shield_seconds)
       << "\n";
    return os.str();
}

DeltaReport compare(const SummaryRow& shielded, const SummaryRow& unshielded) {
    DeltaReport d;
    d.survival_delta = shielded.survival_pct - unshielded.survival_pct;
    d.hit_delta = shielded.hit_pct - unshielded.hit_pct;
    d.cost_delta = shielded.mean_cost - unshielded.mean_cost;
    return d;
}

}  // namespace copomdp
