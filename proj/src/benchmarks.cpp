#include "copomdp/benchmarks.hpp"

#include <algorithm>
#include <stdexcept>

namespace copomdp {

namespace {

// Tiger state layout: (side in {left, right}) x (idle, heard, station) plus
// two absorbing outcome states. 8 states, 6 observations.
enum TigerState : StateId {
    kIdleL = 0,
    kIdleR = 1,
    kHeardL = 2,
    kHeardR = 3,
    kStationL = 4,
    kStationR = 5,
    kEaten = 6,
    kPrize = 7,
};
enum TigerAction : ActionId { kListen = 0, kOpenLeft = 1, kOpenRight = 2, kRecharge = 3 };
enum TigerObs : ObsId {
    kObsQuiet = 0,
    kObsRoarLeft = 1,
    kObsRoarRight = 2,
    kObsStation = 3,
    kObsEaten = 4,
    kObsPrize = 5,
};

}  // namespace

ConsumptionPomdp build_tiger(const TigerParams& p) {
    ConsumptionPomdp m;
    m.state_names = {"idle_left",    "idle_right",    "heard_left", "heard_right",
                     "station_left", "station_right", "eaten",      "prize"};
    m.action_names = {"listen", "open_left", "open_right", "recharge"};
    m.obs_names = {"quiet", "roar_left", "roar_right", "station", "eaten", "prize"};

    const std::size_t ns = m.state_names.size();
    const std::size_t na = m.action_names.size();
    m.transitions.assign(ns, std::vector<Distribution>(na));
    m.obs_fn.assign(ns, Distribution{});
    m.cons.assign(ns, std::vector<int>(na, 0));
    m.cost.assign(ns, std::vector<double>(na, 0.0));
    m.reloads = StateSet(ns);
    m.goals = StateSet(ns);

    for (StateId side = 0; side < 2; ++side) {
        const StateId idle = kIdleL + side;
        const StateId heard = kHeardL + side;
        const StateId station = kStationL + side;
        const StateId other_idle = kIdleL + (1 - side);
        const bool left_has_predator = side == 0;

        for (StateId src : {idle, heard}) {
            m.transitions[src][kListen] = Distribution{{{heard, 1.0}}};
            m.cons[src][kListen] = 1;
            m.cost[src][kListen] = p.step_cost;

            m.transitions[src][kOpenLeft] =
                Distribution{{{left_has_predator ? kEaten : kPrize, 1.0}}};
            m.cost[src][kOpenLeft] = left_has_predator ? p.predator_cost : p.prize_cost;

            m.transitions[src][kOpenRight] =
                Distribution{{{left_has_predator ? kPrize : kEaten, 1.0}}};
            m.cost[src][kOpenRight] = left_has_predator ? p.prize_cost : p.predator_cost;

            m.transitions[src][kRecharge] = Distribution{{{station, 1.0}}};
            m.cons[src][kRecharge] = 1;
            m.cost[src][kRecharge] = p.step_cost;
        }

        // Leaving the station refills the battery; the hidden side may flip
        // while the agent is plugged in.
        for (ActionId a = 0; a < na; ++a) {
            Distribution d{{{idle, 1.0 - p.switch_prob}, {other_idle, p.switch_prob}}};
            d.normalize_order();
            m.transitions[station][a] = d;
            m.cost[station][a] = p.step_cost;
        }
        m.reloads.set(station);

        m.obs_fn[idle] = Distribution{{{kObsQuiet, 1.0}}};
        Distribution roar{{{kObsRoarLeft, side == 0 ? p.p_correct : 1.0 - p.p_correct},
                           {kObsRoarRight, side == 0 ? 1.0 - p.p_correct : p.p_correct}}};
        roar.normalize_order();
        m.obs_fn[heard] = roar;
        m.obs_fn[station] = Distribution{{{kObsStation, 1.0}}};
    }

    for (ActionId a = 0; a < na; ++a) {
        m.transitions[kEaten][a] = Distribution{{{kEaten, 1.0}}};
        m.transitions[kPrize][a] = Distribution{{{kPrize, 1.0}}};
    }
    m.obs_fn[kEaten] = Distribution{{{kObsEaten, 1.0}}};
    m.obs_fn[kPrize] = Distribution{{{kObsPrize, 1.0}}};
    m.goals.set(kEaten);
    m.goals.set(kPrize);

    m.capacity = p.capacity;
    m.init_distr = Distribution{{{kIdleL, 0.5}, {kIdleR, 0.5}}};
    m.init_level = p.capacity;
    return m;
}

GenerativeEnv tiger_env(const ConsumptionPomdp& model, const TigerParams& params) {
    return GenerativeEnv(model, 0.0, params.step_cost);
}

int default_uuv_capacity(int size) {
    switch (size) {
        case 8: return 12;
        case 12: return 16;
        case 16: return 16;
        case 20: return 20;
        default: return size + 4;
    }
}

UuvParams default_uuv_params(int size) {
    UuvParams p;
    p.size = size;
    p.capacity = default_uuv_capacity(size);
    const int lo = size / 4;
    const int hi = 3 * size / 4;
    p.reload_cells = {{lo, lo}, {hi, lo}, {lo, hi}, {hi, hi}};
    p.goal_cells = {{size - 1, size - 1}};
    p.start = {0, 0};
    return p;
}

ConsumptionPomdp build_uuv(const UuvParams& p) {
    if (p.size < 4) throw std::invalid_argument("build_uuv: grid size must be at least 4");
    const int n = p.size;
    const std::size_t ns = static_cast<std::size_t>(n) * n;
    auto cell = [n](int x, int y) { return static_cast<StateId>(y * n + x); };
    auto in_grid = [n](int x, int y) { return x >= 0 && x < n && y >= 0 && y < n; };

    ConsumptionPomdp m;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            m.state_names.push_back("c" + std::to_string(x) + "_" + std::to_string(y));
    m.obs_names = m.state_names;
    // Four headings, strong then weak.
    m.action_names = {"N+", "S+", "E+", "W+", "N-", "S-", "E-", "W-"};
    const int dx[4] = {0, 0, 1, -1};
    const int dy[4] = {1, -1, 0, 0};

    m.reloads = StateSet(ns);
    m.goals = StateSet(ns);
    for (auto [x, y] : p.reload_cells) {
        if (!in_grid(x, y)) throw std::invalid_argument("build_uuv: reload cell outside grid");
        m.reloads.set(cell(x, y));
    }
    for (auto [x, y] : p.goal_cells) {
        if (!in_grid(x, y)) throw std::invalid_argument("build_uuv: goal cell outside grid");
        m.goals.set(cell(x, y));
    }

    const std::size_t na = m.action_names.size();
    m.transitions.assign(ns, std::vector<Distribution>(na));
    m.obs_fn.assign(ns, Distribution{});
    m.cons.assign(ns, std::vector<int>(na, 0));
    m.cost.assign(ns, std::vector<double>(na, 0.0));

    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const StateId s = cell(x, y);
            if (m.goals.test(s)) {
                for (ActionId a = 0; a < na; ++a)
                    m.transitions[s][a] = Distribution{{{s, 1.0}}};
                m.obs_fn[s] = Distribution{{{s, 1.0}}};
                continue;
            }

            for (int dir = 0; dir < 4; ++dir) {
                // Strong move: deterministic, clamped at walls.
                const int fx = x + dx[dir];
                const int fy = y + dy[dir];
                const StateId fwd = in_grid(fx, fy) ? cell(fx, fy) : s;
                m.transitions[s][dir] = Distribution{{{fwd, 1.0}}};
                m.cons[s][dir] = p.strong_cons;
                m.cost[s][dir] = p.step_cost;

                // Weak move: forward or sideways drift, renormalized to the
                // outcomes that stay on the grid.
                const int lx[2] = {dy[dir], -dy[dir]};
                const int ly[2] = {dx[dir], -dx[dir]};
                Distribution d;
                if (in_grid(fx, fy)) d.entries.push_back({cell(fx, fy), p.p_forward});
                for (int side = 0; side < 2; ++side) {
                    const int sx = x + lx[side];
                    const int sy = y + ly[side];
                    if (in_grid(sx, sy))
                        d.entries.push_back({cell(sx, sy), (1.0 - p.p_forward) / 2.0});
                }
                if (d.entries.empty()) d.entries.push_back({s, 1.0});
                double total = 0;
                for (auto& [t, q] : d.entries) total += q;
                for (auto& [t, q] : d.entries) q /= total;
                d.normalize_order();
                // Merge duplicate targets (possible when laterals coincide).
                Distribution merged;
                for (const auto& [t, q] : d.entries) {
                    if (!merged.entries.empty() && merged.entries.back().first == t)
                        merged.entries.back().second += q;
                    else
                        merged.entries.push_back({t, q});
                }
                m.transitions[s][4 + dir] = merged;
                m.cons[s][4 + dir] = p.weak_cons;
                m.cost[s][4 + dir] = p.step_cost;
            }

            // Position sensor: uniform over the in-grid von Neumann
            // neighbourhood. Recharge and goal cells read exactly and are
            // excluded from ordinary cells' noise.
            if (m.reloads.test(s)) {
                m.obs_fn[s] = Distribution{{{s, 1.0}}};
            } else {
                std::vector<StateId> noise{s};
                for (int dir = 0; dir < 4; ++dir) {
                    const int ox = x + dx[dir];
                    const int oy = y + dy[dir];
                    if (!in_grid(ox, oy)) continue;
                    const StateId o = cell(ox, oy);
                    if (m.reloads.test(o) || m.goals.test(o)) continue;
                    noise.push_back(o);
                }
                Distribution d;
                for (StateId o : noise)
                    d.entries.push_back({o, 1.0 / static_cast<double>(noise.size())});
                d.normalize_order();
                m.obs_fn[s] = d;
            }
        }

    m.capacity = p.capacity;
    m.init_distr = Distribution{{{cell(p.start.first, p.start.second), 1.0}}};
    m.init_level = p.capacity;
    return m;
}

GenerativeEnv uuv_env(const ConsumptionPomdp& model, const UuvParams& params) {
    return GenerativeEnv(model, params.goal_entry_cost, params.step_cost);
}

ConsumptionPomdp build_infeasible_fork() {
    ConsumptionPomdp m;
    m.state_names = {"start", "upper", "lower", "dock_a", "dock_b", "done"};
    m.action_names = {"a", "b"};
    m.obs_names = {"origin", "corridor", "dock", "finished"};

    const std::size_t ns = 6, na = 2;
    m.transitions.assign(ns, std::vector<Distribution>(na));
    m.obs_fn.assign(ns, Distribution{});
    m.cons.assign(ns, std::vector<int>(na, 1));
    m.cost.assign(ns, std::vector<double>(na, 1.0));

    const StateId start = 0, upper = 1, lower = 2, dock_a = 3, dock_b = 4, done = 5;
    for (ActionId a = 0; a < na; ++a) {
        m.transitions[start][a] = Distribution{{{upper, 0.5}, {lower, 0.5}}};
        m.transitions[dock_a][a] = Distribution{{{dock_a, 0.5}, {done, 0.5}}};
        m.transitions[dock_b][a] = Distribution{{{dock_b, 1.0}}};
        m.transitions[done][a] = Distribution{{{done, 1.0}}};
        m.cons[done][a] = 0;
        m.cost[done][a] = 0.0;
    }
    m.transitions[upper][0] = Distribution{{{dock_a, 1.0}}};
    m.transitions[upper][1] = Distribution{{{dock_b, 1.0}}};
    m.transitions[lower][0] = Distribution{{{dock_b, 1.0}}};
    m.transitions[lower][1] = Distribution{{{dock_a, 1.0}}};

    m.obs_fn[start] = Distribution{{{0, 1.0}}};
    m.obs_fn[upper] = Distribution{{{1, 1.0}}};
    m.obs_fn[lower] = Distribution{{{1, 1.0}}};
    m.obs_fn[dock_a] = Distribution{{{2, 1.0}}};
    m.obs_fn[dock_b] = Distribution{{{2, 1.0}}};
    m.obs_fn[done] = Distribution{{{3, 1.0}}};

    m.reloads = StateSet(ns);
    m.reloads.set(dock_a);
    m.reloads.set(dock_b);
    m.goals = StateSet(ns);
    m.goals.set(done);
    m.capacity = 10;
    m.init_distr = Distribution{{{start, 1.0}}};
    m.init_level = 10;
    return m;
}

}  // namespace copomdp
