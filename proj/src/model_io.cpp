#include "copomdp/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace copomdp {

using nlohmann::json;

namespace {

json dist_to_json(const Distribution& d) {
    json out = json::array();
    for (const auto& [i, p] : d.entries) out.push_back(json::array({i, p}));
    return out;
}

Distribution dist_from_json(const json& j, std::size_t index_bound, const char* what) {
    if (!j.is_array()) throw std::runtime_error(std::string(what) + ": dist must be an array");
    Distribution d;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2)
            throw std::runtime_error(std::string(what) + ": dist entries must be [index, prob]");
        std::size_t idx = e[0].get<std::size_t>();
        double p = e[1].get<double>();
        if (idx >= index_bound)
            throw std::runtime_error(std::string(what) + ": index out of range");
        d.entries.push_back({idx, p});
    }
    d.normalize_order();
    return d;
}

std::vector<std::string> names_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw std::runtime_error(std::string(what) + " must be an array of names");
    std::vector<std::string> out;
    for (const auto& e : j) out.push_back(e.get<std::string>());
    return out;
}

}  // namespace

std::string to_json(const ConsumptionPomdp& m) {
    json j;
    j["states"] = m.state_names;
    j["actions"] = m.action_names;
    j["observations"] = m.obs_names;

    json trans = json::array();
    for (StateId s = 0; s < m.num_states(); ++s)
        for (ActionId a = 0; a < m.num_actions(); ++a) {
            json row;
            row["state"] = s;
            row["action"] = a;
            row["dist"] = dist_to_json(m.transitions[s][a]);
            trans.push_back(row);
        }
    j["transitions"] = trans;

    json obs = json::array();
    for (StateId s = 0; s < m.num_states(); ++s) {
        json row;
        row["state"] = s;
        row["dist"] = dist_to_json(m.obs_fn[s]);
        obs.push_back(row);
    }
    j["obs_fn"] = obs;

    j["cons"] = m.cons;
    j["cost"] = m.cost;
    j["reloads"] = m.reloads.to_indices();
    j["goals"] = m.goals.to_indices();
    j["capacity"] = m.capacity;
    j["init_distr"] = dist_to_json(m.init_distr);
    j["init_level"] = m.init_level;
    return j.dump(2);
}

ConsumptionPomdp from_json(const std::string& text) {
    json j = json::parse(text);
    if (!j.is_object()) throw std::runtime_error("model file: top level must be an object");

    static const std::set<std::string> known = {
        "states", "actions",  "observations", "transitions", "obs_fn",     "cons",
        "cost",   "reloads",  "goals",        "capacity",    "init_distr", "init_level"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw std::runtime_error("model file: unknown key '" + key + "'");
    for (const auto& key : known)
        if (!j.contains(key)) throw std::runtime_error("model file: missing key '" + key + "'");

    ConsumptionPomdp m;
    m.state_names = names_from_json(j["states"], "states");
    m.action_names = names_from_json(j["actions"], "actions");
    m.obs_names = names_from_json(j["observations"], "observations");
    const std::size_t ns = m.state_names.size();
    const std::size_t na = m.action_names.size();
    const std::size_t no = m.obs_names.size();
    if (ns == 0 || na == 0 || no == 0)
        throw std::runtime_error("model file: states, actions, observations must be non-empty");

    m.transitions.assign(ns, std::vector<Distribution>(na));
    std::vector<std::vector<bool>> seen(ns, std::vector<bool>(na, false));
    for (const auto& row : j["transitions"]) {
        StateId s = row.at("state").get<StateId>();
        ActionId a = row.at("action").get<ActionId>();
        if (s >= ns || a >= na) throw std::runtime_error("transitions: state/action out of range");
        if (seen[s][a]) throw std::runtime_error("transitions: duplicate (state, action) entry");
        seen[s][a] = true;
        m.transitions[s][a] = dist_from_json(row.at("dist"), ns, "transitions");
    }
    for (StateId s = 0; s < ns; ++s)
        for (ActionId a = 0; a < na; ++a)
            if (!seen[s][a])
                throw std::runtime_error("transitions: missing entry for state " +
                                         m.state_names[s] + ", action " + m.action_names[a]);

    m.obs_fn.assign(ns, Distribution{});
    std::vector<bool> obs_seen(ns, false);
    for (const auto& row : j["obs_fn"]) {
        StateId s = row.at("state").get<StateId>();
        if (s >= ns) throw std::runtime_error("obs_fn: state out of range");
        if (obs_seen[s]) throw std::runtime_error("obs_fn: duplicate state entry");
        obs_seen[s] = true;
        m.obs_fn[s] = dist_from_json(row.at("dist"), no, "obs_fn");
    }
    for (StateId s = 0; s < ns; ++s)
        if (!obs_seen[s])
            throw std::runtime_error("obs_fn: missing entry for state " + m.state_names[s]);

    m.cons = j["cons"].get<std::vector<std::vector<int>>>();
    m.cost = j["cost"].get<std::vector<std::vector<double>>>();
    if (m.cons.size() != ns || m.cost.size() != ns)
        throw std::runtime_error("cons/cost: one row per state required");
    for (StateId s = 0; s < ns; ++s)
        if (m.cons[s].size() != na || m.cost[s].size() != na)
            throw std::runtime_error("cons/cost: one value per action required");

    m.reloads = StateSet(ns);
    for (const auto& e : j["reloads"]) {
        StateId s = e.get<StateId>();
        if (s >= ns) throw std::runtime_error("reloads: state out of range");
        m.reloads.set(s);
    }
    m.goals = StateSet(ns);
    for (const auto& e : j["goals"]) {
        StateId s = e.get<StateId>();
        if (s >= ns) throw std::runtime_error("goals: state out of range");
        m.goals.set(s);
    }
    m.capacity = j["capacity"].get<int>();
    m.init_distr = dist_from_json(j["init_distr"], ns, "init_distr");
    m.init_level = j["init_level"].get<int>();
    return m;
}

void save_model(const ConsumptionPomdp& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << to_json(m) << "\n";
}

ConsumptionPomdp load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::string model_fingerprint(const ConsumptionPomdp& m) {
    const std::string text = to_json(m);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace copomdp
