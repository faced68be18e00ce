#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "routegame/engine.hpp"

namespace routegame {

/// Parse or semantic error in a scenario file, with a 1-based line anchor
/// (0 when no single line is responsible).
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string file, int line, const std::string& msg);
    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_ = 0;
};

struct GroupSpec {
    std::string name;
    int count = 0;
    int source = 0;
    int sink = 0;
};

struct ExternalEntry {
    bool by_path = false;
    std::vector<int> nodes;        // link endpoints, or node sequence of a path
    std::vector<double> per_slot;  // one value per period slot
    int line = 0;
};

struct EventConfig {
    int time = 0;
    std::string kind;  // "fault" | "repair"
    std::string group;
    int line = 0;
};

/// Everything a run needs, as plain data read from one scenario file.
/// Units: one step per second, transmissions in data units per slot.
struct Scenario {
    std::string name = "scenario";

    // [network]
    int nodes = 0;
    std::vector<std::pair<int, int>> links;
    int hop_bound = 6;

    // [price]
    std::string price_kind = "linear";
    double price_slope = 1.0;
    std::vector<std::pair<double, double>> price_points;

    // [population]
    int period = 7;
    double rate_cap = 1.0;
    int eta_lo = 2, eta_hi = 5;
    int offset_lo = 0, offset_hi = 6;
    double demand_min = 0.5;
    double demand_cap_fraction = 0.5;  // upper support as a share of window capacity

    std::vector<GroupSpec> groups;
    std::vector<ExternalEntry> external;
    std::vector<EventConfig> events;

    // [run]
    int steps = 200;
    int gamma = 1;
    std::uint64_t seed = 1;
    double tol = kConvergenceTol;
    std::vector<int> tracked;

    int total_agents() const;
};

Scenario parse_scenario_text(const std::string& text, const std::string& name);
Scenario parse_scenario_file(const std::string& path);

/// The shipped demo: three groups sharing two corridor links, a mid-run fault
/// of group B and its later repair.
std::string demo_scenario_text();

struct ValidationIssue {
    std::string message;
};
/// Static invariants plus a seeded draw of the population to confirm every
/// agent's demand fits its window capacity.
std::vector<ValidationIssue> validate_scenario(const Scenario& scn);

struct Instance {
    NetworkModel net;
    Population agents;
    PriceModel price;
    ExternalLoad ext;
    int period = 0;
};

/// Deterministic instance construction: path enumeration per group pair,
/// seeded parameter draws, external load ingestion (per-path entries are
/// folded onto their links).
Instance build_instance(const Scenario& scn);

/// Seeded draw of per-agent parameters; identical seed, identical population.
Population generate_population(const Scenario& scn, const NetworkModel& net,
                               const std::vector<std::vector<int>>& group_paths);

/// Feasible starting plan at phase 0: every agent's demand spread uniformly
/// over its window cells.
PeriodStrategy initial_strategy(const Population& agents, int period, int paths);

struct MetricsTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // NaN marks an empty cell
};

struct RunOutputs {
    Instance instance;
    std::vector<EventSpec> events;
    Trajectory traj;
    MetricsTable metrics;
};

/// Full pipeline: build, start, run, tabulate. Pure function of the scenario.
RunOutputs run_scenario(const Scenario& scn, ExecMode mode = ExecMode::Parallel);

/// Rolling conservation audit: joins the implemented history with the current
/// plan and checks that every completed, undisturbed window of every agent
/// carries exactly its demand. Returns the worst absolute defect.
double conservation_audit(const Trajectory& traj, const Population& agents,
                          const std::vector<EventSpec>& events);

// Deterministic draw helpers (fixed mapping from raw engine output, so
// results do not depend on the standard library's distribution choices).
int draw_int(std::mt19937_64& g, int lo, int hi);
double draw_real(std::mt19937_64& g, double lo, double hi);

}  // namespace routegame
