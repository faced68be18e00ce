#include "routegame/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace routegame {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

long to_long(const std::string& file, int line, const std::string& t) {
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(t, &pos);
    } catch (...) {
        throw ScenarioError(file, line, "expected integer, got '" + t + "'");
    }
    if (pos != t.size()) throw ScenarioError(file, line, "expected integer, got '" + t + "'");
    return v;
}

double to_double(const std::string& file, int line, const std::string& t) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(t, &pos);
    } catch (...) {
        throw ScenarioError(file, line, "expected number, got '" + t + "'");
    }
    if (pos != t.size()) throw ScenarioError(file, line, "expected number, got '" + t + "'");
    return v;
}

std::vector<int> effective_tracked(const Scenario& scn, int total) {
    if (!scn.tracked.empty()) return scn.tracked;
    std::vector<int> ids;
    if (total > 5) {
        ids = {4, 5};
    } else {
        for (int i = 0; i < std::min(total, 2); ++i) ids.push_back(i);
    }
    return ids;
}

bool active_at(int agent, int t, const std::vector<EventSpec>& events) {
    bool active = true;
    for (const EventSpec& ev : events) {
        if (ev.time > t) break;
        if (std::find(ev.agents.begin(), ev.agents.end(), agent) != ev.agents.end())
            active = ev.kind == EventKind::Repair;
    }
    return active;
}

int last_disturbance(int agent, int t, const std::vector<EventSpec>& events) {
    int last = 0;
    for (const EventSpec& ev : events) {
        if (ev.time > t) break;
        if (std::find(ev.agents.begin(), ev.agents.end(), agent) != ev.agents.end())
            last = ev.time;
    }
    return last;
}

}  // namespace

ScenarioError::ScenarioError(std::string file, int line, const std::string& msg)
    : std::runtime_error(line > 0 ? file + ":" + std::to_string(line) + ": " + msg
                                  : file + ": " + msg),
      file_(std::move(file)),
      line_(line) {}

int Scenario::total_agents() const {
    int n = 0;
    for (const GroupSpec& g : groups) n += g.count;
    return n;
}

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
    Scenario scn;
    scn.name = name;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    bool seen_eta = false, seen_offset = false;

    while (std::getline(in, raw)) {
        ++line_no;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ScenarioError(name, line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            static const std::set<std::string> known{"network", "price",  "population", "group",
                                                     "external", "events", "run"};
            if (!known.count(section))
                throw ScenarioError(name, line_no, "unknown section [" + section + "]");
            if (section == "group") scn.groups.emplace_back();
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ScenarioError(name, line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ScenarioError(name, line_no, "key outside any section");

        auto ints = [&](int n) {
            auto ts = tokens(value);
            if (static_cast<int>(ts.size()) != n)
                throw ScenarioError(name, line_no, "expected " + std::to_string(n) + " integer(s)");
            std::vector<int> out;
            for (auto& t : ts) out.push_back(static_cast<int>(to_long(name, line_no, t)));
            return out;
        };

        if (section == "network") {
            if (key == "nodes") scn.nodes = ints(1)[0];
            else if (key == "link") { auto v = ints(2); scn.links.emplace_back(v[0], v[1]); }
            else if (key == "hop_bound") scn.hop_bound = ints(1)[0];
            else throw ScenarioError(name, line_no, "unknown key '" + key + "' in [network]");
        } else if (section == "price") {
            if (key == "kind") scn.price_kind = value;
            else if (key == "slope") scn.price_slope = to_double(name, line_no, value);
            else if (key == "point") {
                auto ts = tokens(value);
                if (ts.size() != 2) throw ScenarioError(name, line_no, "point needs two numbers");
                scn.price_points.emplace_back(to_double(name, line_no, ts[0]),
                                              to_double(name, line_no, ts[1]));
            } else throw ScenarioError(name, line_no, "unknown key '" + key + "' in [price]");
        } else if (section == "population") {
            if (key == "period") scn.period = ints(1)[0];
            else if (key == "mu") scn.rate_cap = to_double(name, line_no, value);
            else if (key == "eta") { auto v = ints(2); scn.eta_lo = v[0]; scn.eta_hi = v[1]; seen_eta = true; }
            else if (key == "offset") { auto v = ints(2); scn.offset_lo = v[0]; scn.offset_hi = v[1]; seen_offset = true; }
            else if (key == "demand_min") scn.demand_min = to_double(name, line_no, value);
            else if (key == "demand_cap_fraction") scn.demand_cap_fraction = to_double(name, line_no, value);
            else throw ScenarioError(name, line_no, "unknown key '" + key + "' in [population]");
        } else if (section == "group") {
            if (scn.groups.empty()) throw ScenarioError(name, line_no, "group key before [group]");
            GroupSpec& g = scn.groups.back();
            if (key == "name") g.name = value;
            else if (key == "count") g.count = ints(1)[0];
            else if (key == "source") g.source = ints(1)[0];
            else if (key == "sink") g.sink = ints(1)[0];
            else throw ScenarioError(name, line_no, "unknown key '" + key + "' in [group]");
        } else if (section == "external") {
            const size_t colon = value.find(':');
            if (colon == std::string::npos)
                throw ScenarioError(name, line_no, "external entry needs 'ids : values'");
            auto id_toks = tokens(value.substr(0, colon));
            auto val_toks = tokens(value.substr(colon + 1));
            ExternalEntry entry;
            entry.line = line_no;
            for (auto& t : id_toks) entry.nodes.push_back(static_cast<int>(to_long(name, line_no, t)));
            for (auto& t : val_toks) entry.per_slot.push_back(to_double(name, line_no, t));
            if (key == "link") {
                if (entry.nodes.size() != 2)
                    throw ScenarioError(name, line_no, "external link needs two node ids");
            } else if (key == "path") {
                if (entry.nodes.size() < 2)
                    throw ScenarioError(name, line_no, "external path needs at least two nodes");
                entry.by_path = true;
            } else throw ScenarioError(name, line_no, "unknown key '" + key + "' in [external]");
            scn.external.push_back(std::move(entry));
        } else if (section == "events") {
            if (key != "fault" && key != "repair")
                throw ScenarioError(name, line_no, "unknown key '" + key + "' in [events]");
            auto ts = tokens(value);
            if (ts.size() != 2) throw ScenarioError(name, line_no, "event needs 'time group'");
            EventConfig ev;
            ev.kind = key;
            ev.time = static_cast<int>(to_long(name, line_no, ts[0]));
            ev.group = ts[1];
            ev.line = line_no;
            scn.events.push_back(std::move(ev));
        } else if (section == "run") {
            if (key == "steps") scn.steps = ints(1)[0];
            else if (key == "gamma") scn.gamma = ints(1)[0];
            else if (key == "seed") scn.seed = static_cast<std::uint64_t>(to_long(name, line_no, value));
            else if (key == "tol") scn.tol = to_double(name, line_no, value);
            else if (key == "tracked") { scn.tracked.clear(); for (auto& t : tokens(value)) scn.tracked.push_back(static_cast<int>(to_long(name, line_no, t))); }
            else throw ScenarioError(name, line_no, "unknown key '" + key + "' in [run]");
        }
    }

    // Keep the default integer supports inside a nondefault period.
    if (!seen_eta) scn.eta_hi = std::min(scn.eta_hi, scn.period - 1);
    if (!seen_offset) scn.offset_hi = std::min(scn.offset_hi, scn.period - 1);
    return scn;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path, 0, "cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

std::vector<ValidationIssue> validate_scenario(const Scenario& scn) {
    std::vector<ValidationIssue> issues;
    auto add = [&](const std::string& m) { issues.push_back({m}); };

    if (scn.nodes < 1) add("network needs at least one node");
    for (const auto& [a, b] : scn.links) {
        if (a < 0 || a >= scn.nodes || b < 0 || b >= scn.nodes) add("link endpoint out of node range");
        else if (a == b) add("self-loop link");
    }
    if (scn.period < 1) add("period must be at least 1");
    if (scn.steps < 0) add("steps must be nonnegative");
    if (scn.gamma < 1) add("gamma must be at least 1");
    if (!(scn.rate_cap > 0.0)) add("mu must be positive");
    if (scn.eta_lo < 0 || scn.eta_hi >= scn.period || scn.eta_lo > scn.eta_hi)
        add("eta bounds must satisfy 0 <= lo <= hi <= period-1");
    if (scn.offset_lo < 0 || scn.offset_hi >= scn.period || scn.offset_lo > scn.offset_hi)
        add("offset bounds must satisfy 0 <= lo <= hi <= period-1");
    if (scn.demand_min < 0.0) add("demand_min must be nonnegative");
    if (!(scn.demand_cap_fraction > 0.0) || scn.demand_cap_fraction > 1.0)
        add("demand_cap_fraction must be in (0, 1]");
    if (!(scn.tol > 0.0)) add("tol must be positive");

    if (scn.price_kind == "linear") {
        if (!(scn.price_slope > 0.0)) add("price slope must be positive");
    } else if (scn.price_kind == "piecewise") {
        std::vector<double> xs, ys;
        for (auto& [x, y] : scn.price_points) { xs.push_back(x); ys.push_back(y); }
        try {
            PriceModel::piecewise(xs, ys);
        } catch (const std::exception& e) {
            add(std::string("piecewise price invalid: ") + e.what());
        }
    } else {
        add("price kind must be 'linear' or 'piecewise'");
    }

    std::set<std::string> names;
    for (const GroupSpec& g : scn.groups) {
        if (g.name.empty()) add("group without a name");
        else if (!names.insert(g.name).second) add("duplicate group name '" + g.name + "'");
        if (g.count < 0) add("group '" + g.name + "' has negative count");
        if (g.source < 0 || g.source >= scn.nodes || g.sink < 0 || g.sink >= scn.nodes)
            add("group '" + g.name + "' endpoint out of node range");
        else if (g.source == g.sink) add("group '" + g.name + "' source equals sink");
    }

    int prev_time = 0;
    std::map<std::string, bool> faulted;
    for (const EventConfig& ev : scn.events) {
        if (!names.count(ev.group)) add("event references unknown group '" + ev.group + "'");
        if (ev.time < 1) add("event time must be at least 1");
        if (ev.time <= prev_time) add("event times must be strictly increasing");
        prev_time = ev.time;
        bool& f = faulted[ev.group];
        if (ev.kind == "fault") {
            if (f) add("group '" + ev.group + "' faulted twice without repair");
            f = true;
        } else {
            if (!f) add("repair of group '" + ev.group + "' that is not faulted");
            f = false;
        }
    }

    for (const ExternalEntry& e : scn.external) {
        if (static_cast<int>(e.per_slot.size()) != scn.period)
            add("external entry needs one value per period slot");
        for (double v : e.per_slot)
            if (!(v >= 0.0) || !std::isfinite(v)) add("external values must be finite and nonnegative");
        for (int n : e.nodes)
            if (n < 0 || n >= scn.nodes) add("external entry node out of range");
    }

    if (!issues.empty()) return issues;  // structural problems block the draw below

    // Drawn-agent capacity: enumerate paths per group, check the demand
    // support against the smallest drawable window.
    NetworkModel net;
    net.nodes = scn.nodes;
    net.links = scn.links;
    net.finalize();
    for (const GroupSpec& g : scn.groups) {
        if (g.count == 0) continue;
        const auto paths = enumerate_simple_paths(net, g.source, g.sink, scn.hop_bound);
        if (paths.empty()) {
            if (scn.demand_min > 0.0)
                add("group '" + g.name + "' has no source-sink path within the hop bound");
            continue;
        }
        const double min_capacity = scn.rate_cap * (scn.eta_lo + 1) * static_cast<double>(paths.size());
        if (scn.demand_min > scn.demand_cap_fraction * min_capacity)
            add("group '" + g.name + "': demand support exceeds the smallest window capacity");
    }
    for (const ExternalEntry& e : scn.external) {
        if (e.by_path) {
            for (size_t j = 0; j + 1 < e.nodes.size(); ++j) {
                bool found = false;
                for (const auto& [a, b] : scn.links)
                    if (a == e.nodes[j] && b == e.nodes[j + 1]) { found = true; break; }
                if (!found) add("external path uses a nonexistent link");
            }
        } else {
            bool found = false;
            for (const auto& [a, b] : scn.links)
                if (a == e.nodes[0] && b == e.nodes[1]) { found = true; break; }
            if (!found) add("external entry references a nonexistent link");
        }
    }
    if (!issues.empty()) return issues;

    try {
        Instance inst = build_instance(scn);
        for (const AgentSpec& a : inst.agents)
            if (a.demand > a.window_capacity() + 1e-12)
                add("drawn agent " + std::to_string(a.id) + " in group '" + a.group +
                    "' exceeds its window capacity");
        const int total = scn.total_agents();
        for (int id : scn.tracked)
            if (id < 0 || id >= total) add("tracked agent id out of range");
    } catch (const std::exception& e) {
        add(std::string("instance construction failed: ") + e.what());
    }
    return issues;
}

int draw_int(std::mt19937_64& g, int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t r;
    do { r = g(); } while (r >= limit);
    return lo + static_cast<int>(r % span);
}

double draw_real(std::mt19937_64& g, double lo, double hi) {
    const double u = static_cast<double>(g() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

Population generate_population(const Scenario& scn, const NetworkModel& net,
                               const std::vector<std::vector<int>>& group_paths) {
    std::mt19937_64 rng(scn.seed);
    Population agents;
    agents.reserve(scn.total_agents());
    for (size_t gi = 0; gi < scn.groups.size(); ++gi) {
        const GroupSpec& g = scn.groups[gi];
        for (int k = 0; k < g.count; ++k) {
            AgentSpec a;
            a.id = static_cast<int>(agents.size());
            a.group = g.name;
            a.source = g.source;
            a.sink = g.sink;
            a.rate_cap = scn.rate_cap;
            a.window_extent = draw_int(rng, scn.eta_lo, scn.eta_hi);
            a.offset = draw_int(rng, scn.offset_lo, scn.offset_hi);
            a.path_ids = group_paths[gi];
            const double cap = scn.demand_cap_fraction * a.rate_cap * a.window_slots() *
                               static_cast<double>(a.path_ids.size());
            if (cap < scn.demand_min)
                throw ScenarioError(scn.name, 0,
                                    "demand support empty for group '" + g.name + "'");
            a.demand = draw_real(rng, scn.demand_min, cap);
            a.validate(net, scn.period);
            agents.push_back(std::move(a));
        }
    }
    return agents;
}

Instance build_instance(const Scenario& scn) {
    Instance inst;
    inst.period = scn.period;
    inst.net.nodes = scn.nodes;
    inst.net.links = scn.links;

    std::map<std::pair<int, int>, std::vector<int>> pair_paths;
    std::vector<std::vector<int>> group_paths(scn.groups.size());
    for (size_t gi = 0; gi < scn.groups.size(); ++gi) {
        const GroupSpec& g = scn.groups[gi];
        const auto key = std::make_pair(g.source, g.sink);
        auto it = pair_paths.find(key);
        if (it == pair_paths.end()) {
            inst.net.finalize();
            std::vector<int> ids;
            for (auto& links : enumerate_simple_paths(inst.net, g.source, g.sink, scn.hop_bound)) {
                ids.push_back(inst.net.path_count());
                inst.net.paths.push_back(std::move(links));
            }
            it = pair_paths.emplace(key, std::move(ids)).first;
        }
        group_paths[gi] = it->second;
    }
    inst.net.finalize();
    inst.net.validate();

    if (scn.price_kind == "linear") {
        inst.price = PriceModel::linear(scn.price_slope);
    } else {
        std::vector<double> xs, ys;
        for (auto& [x, y] : scn.price_points) { xs.push_back(x); ys.push_back(y); }
        inst.price = PriceModel::piecewise(std::move(xs), std::move(ys));
    }

    inst.ext = ExternalLoad::zeros(inst.net.link_count(), scn.period);
    auto link_index = [&](int a, int b) {
        for (int l = 0; l < inst.net.link_count(); ++l)
            if (inst.net.links[l] == std::make_pair(a, b)) return l;
        throw ScenarioError(scn.name, 0, "external entry references a nonexistent link");
    };
    for (const ExternalEntry& e : scn.external) {
        if (static_cast<int>(e.per_slot.size()) != scn.period)
            throw ScenarioError(scn.name, e.line, "external entry needs one value per slot");
        if (e.by_path) {
            for (size_t j = 0; j + 1 < e.nodes.size(); ++j) {
                const int l = link_index(e.nodes[j], e.nodes[j + 1]);
                for (int tau = 0; tau < scn.period; ++tau) inst.ext.at(l, tau) += e.per_slot[tau];
            }
        } else {
            const int l = link_index(e.nodes[0], e.nodes[1]);
            for (int tau = 0; tau < scn.period; ++tau) inst.ext.at(l, tau) += e.per_slot[tau];
        }
    }

    inst.agents = generate_population(scn, inst.net, group_paths);
    return inst;
}

PeriodStrategy initial_strategy(const Population& agents, int period, int paths) {
    PeriodStrategy x(static_cast<int>(agents.size()), period, paths);
    for (const AgentSpec& a : agents) fill_agent_window(x, a, 0);
    return x;
}

RunOutputs run_scenario(const Scenario& scn, ExecMode mode) {
    {
        const auto issues = validate_scenario(scn);
        if (!issues.empty()) throw ScenarioError(scn.name, 0, issues.front().message);
    }
    RunOutputs out{build_instance(scn), {}, {}, {}};
    const GameContext ctx{out.instance.net, out.instance.price, out.instance.ext, scn.period};

    for (const EventConfig& ec : scn.events) {
        EventSpec ev;
        ev.time = ec.time;
        ev.kind = ec.kind == "fault" ? EventKind::Fault : EventKind::Repair;
        ev.group = ec.group;
        for (const AgentSpec& a : out.instance.agents)
            if (a.group == ec.group) ev.agents.push_back(a.id);
        out.events.push_back(std::move(ev));
    }

    const PeriodStrategy x0 =
        initial_strategy(out.instance.agents, scn.period, out.instance.net.path_count());
    out.traj = run(ctx, out.instance.agents, x0, scn.steps, out.events, scn.gamma, mode);

    // Metrics table, one row per completed step.
    const int T = scn.period;
    const int N = out.traj.agent_count;
    const int P = out.traj.path_count;
    const std::vector<int> tracked = effective_tracked(scn, N);
    out.metrics.columns = {"t", "V_pred", "V_impl"};
    for (int id : tracked) {
        out.metrics.columns.push_back("delta_phi_" + std::to_string(id));
        out.metrics.columns.push_back("J_pred_" + std::to_string(id));
        out.metrics.columns.push_back("J_impl_" + std::to_string(id));
    }
    for (int t = 1; t <= out.traj.steps(); ++t) {
        std::vector<double> row;
        row.push_back(t);
        row.push_back(out.traj.v_pred[t]);

        const bool have_window = t >= T - 1;
        row.push_back(out.traj.v_impl[t]);
        PeriodStrategy window(N, T, P);
        if (have_window)
            for (int j = 0; j < T; ++j) {
                const auto& slice = out.traj.psi[t - T + 1 + j];
                for (int i = 0; i < N; ++i)
                    for (int p = 0; p < P; ++p)
                        window.at(i, j, p) = slice[static_cast<size_t>(i) * P + p];
            }
        for (int id : tracked) {
            row.push_back(agent_distance(out.traj.phi[t], out.traj.phi[t - 1], id));
            row.push_back(local_cost(ctx, out.instance.agents, out.traj.phi[t], id, t % T, mode));
            row.push_back(have_window ? local_cost(ctx, out.instance.agents, window, id,
                                                   (t - T + 1) % T, mode)
                                      : kNaN);
        }
        out.metrics.rows.push_back(std::move(row));
    }
    return out;
}

std::string demo_scenario_text() {
    return R"(# Demo: three transmitter groups share two corridor links.
# Group sources 0..2 reach their sinks 7..9 through corridor 3->4 or 5->6,
# so every agent picks between two three-hop routes that everyone shares in
# the middle. Group B drops out at step 85 and returns at step 125.

[network]
nodes = 10
link = 0 3
link = 0 5
link = 1 3
link = 1 5
link = 2 3
link = 2 5
link = 3 4
link = 5 6
link = 4 7
link = 6 7
link = 4 8
link = 6 8
link = 4 9
link = 6 9
hop_bound = 6

[price]
kind = linear
slope = 1.0

[population]
period = 7
mu = 1.0
eta = 2 5
offset = 0 6
demand_min = 0.5
demand_cap_fraction = 0.5

[group]
name = A
count = 38
source = 0
sink = 7

[group]
name = B
count = 25
source = 1
sink = 8

[group]
name = C
count = 37
source = 2
sink = 9

[events]
fault = 85 B
repair = 125 B

[run]
steps = 200
gamma = 1
seed = 7
tol = 1e-6
tracked = 4 5
)";
}

double conservation_audit(const Trajectory& traj, const Population& agents,
                          const std::vector<EventSpec>& events) {
    const int T = traj.period;
    const int P = traj.path_count;
    const int steps = traj.steps();
    double worst = 0.0;

    for (const AgentSpec& a : agents) {
        if (a.path_ids.empty()) continue;
        // Implemented per-time window-path mass.
        std::vector<double> impl(steps + 1, 0.0);
        for (int t = 0; t <= steps; ++t) {
            double s = 0.0;
            for (int p : a.path_ids) s += traj.psi[t][static_cast<size_t>(a.id) * P + p];
            impl[t] = s;
        }
        for (int t = 0; t <= steps; ++t) {
            if (!active_at(a.id, t, events)) continue;
            const int disturbed = last_disturbance(a.id, t, events);
            for (int k = 0;; ++k) {
                const int start = k * T + a.offset;
                const int end = start + a.window_extent;
                if (end > t + T - 1) break;
                if (start < disturbed) continue;
                double mass = 0.0;
                for (int abs_t = start; abs_t <= end; ++abs_t) {
                    if (abs_t < t) {
                        mass += impl[abs_t];
                    } else {
                        double s = 0.0;
                        for (int p : a.path_ids) s += traj.phi[t].at(a.id, abs_t - t, p);
                        mass += s;
                    }
                }
                worst = std::max(worst, std::abs(mass - a.demand));
            }
        }
    }
    return worst;
}

}  // namespace routegame
