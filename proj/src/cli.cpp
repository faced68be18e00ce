#include "routegame/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "routegame/io.hpp"
#include "routegame/oracle.hpp"
#include "routegame/scenario.hpp"

namespace routegame {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInput = 2;
constexpr int kExitAssertion = 3;

struct Options {
    std::string scenario;
    std::string out_dir = ".";
    std::string dump_path;
    std::string metrics_path;
    std::optional<int> gamma;
    std::optional<int> steps;
    std::optional<long long> seed;
    std::optional<double> tol;
    bool dump_trajectory = false;
    bool svg = false;
};

Scenario load_scenario(const Options& opt) {
    Scenario scn;
    if (opt.scenario == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        scn = parse_scenario_text(buf.str(), "<stdin>");
    } else {
        scn = parse_scenario_file(opt.scenario);
    }
    if (opt.gamma) scn.gamma = *opt.gamma;
    if (opt.steps) scn.steps = *opt.steps;
    if (opt.seed) scn.seed = static_cast<std::uint64_t>(*opt.seed);
    if (opt.tol) scn.tol = *opt.tol;
    return scn;
}

// Event-free step ranges [begin, end] of a run, split at event times.
std::vector<std::pair<int, int>> segments(const Scenario& scn) {
    std::vector<std::pair<int, int>> segs;
    int begin = 0;
    for (const EventConfig& ev : scn.events) {
        if (ev.time > scn.steps) break;
        segs.emplace_back(begin, ev.time - 1);
        begin = ev.time;
    }
    segs.emplace_back(begin, scn.steps);
    return segs;
}

int cmd_run(const Options& opt) {
    const Scenario scn = load_scenario(opt);
    {
        const auto issues = validate_scenario(scn);
        if (!issues.empty()) {
            for (const auto& issue : issues)
                std::cerr << opt.scenario << ": " << issue.message << "\n";
            return kExitInput;
        }
    }
    std::filesystem::create_directories(opt.out_dir);
    RunOutputs out = run_scenario(scn);

    const std::string metrics_path = opt.out_dir + "/metrics.csv";
    write_metrics_csv(metrics_path, out.metrics);
    std::cout << "wrote " << metrics_path << " (" << out.metrics.rows.size() << " rows)\n";
    if (opt.dump_trajectory) {
        write_trajectory_dump(opt.out_dir + "/trajectory.jsonl", out.traj);
        write_event_log(opt.out_dir + "/events.jsonl", out.events);
        std::cout << "wrote " << opt.out_dir << "/trajectory.jsonl and events.jsonl\n";
    }
    if (opt.svg)
        for (const std::string& p : write_standard_plots(opt.out_dir, out.metrics))
            std::cout << "wrote " << p << "\n";

    for (const auto& [b, e] : segments(scn)) {
        const ConvergenceReport rep = convergence_report(out.traj, scn.tol, b, e);
        if (rep.converged)
            std::printf("segment [%d, %d]: converged at t*=%d, periodicity defect %.3g\n", b, e,
                        rep.t_star, rep.periodicity_defect);
        else
            std::printf("segment [%d, %d]: not converged (last update norm %.3g)\n", b, e,
                        rep.last_update_norm);
    }
    {
        const GameContext ctx{out.instance.net, out.instance.price, out.instance.ext, scn.period};
        const int last = out.traj.steps();
        const ResidualReport rr = equilibrium_residual(ctx, out.instance.agents,
                                                       out.traj.phi[last], last % scn.period);
        std::printf("final state: max equilibrium residual %.3g (mean per-agent cost %.6g)\n",
                    rr.max_residual, rr.mean_cost);
    }

    if (out.traj.worst_monotonicity_gap > kMonotonicityTol ||
        out.traj.worst_feasibility > kEqualityTol) {
        std::cerr << "internal assertion violated: potential gap "
                  << out.traj.worst_monotonicity_gap << ", feasibility "
                  << out.traj.worst_feasibility << "\n";
        return kExitAssertion;
    }
    return kExitOk;
}

int cmd_validate(const Options& opt) {
    const Scenario scn = load_scenario(opt);
    const auto issues = validate_scenario(scn);
    if (issues.empty()) {
        std::cout << opt.scenario << ": ok (" << scn.total_agents() << " agents, "
                  << scn.links.size() << " links)\n";
        return kExitOk;
    }
    for (const auto& issue : issues) std::cout << opt.scenario << ": " << issue.message << "\n";
    return kExitValidation;
}

int cmd_equilibrium_check(const Options& opt) {
    const Scenario scn = load_scenario(opt);
    {
        const auto issues = validate_scenario(scn);
        if (!issues.empty()) {
            for (const auto& issue : issues)
                std::cerr << opt.scenario << ": " << issue.message << "\n";
            return kExitInput;
        }
    }
    const DumpState st = read_last_dump_state(opt.dump_path);

    Instance inst = build_instance(scn);
    if (st.agents != static_cast<int>(inst.agents.size()) || st.slots != scn.period ||
        st.paths != inst.net.path_count())
        throw std::runtime_error("trajectory dump does not match the scenario dimensions");

    // Replay the schedule so the active flags match the dumped step.
    for (const EventConfig& ec : scn.events) {
        if (ec.time > st.t) break;
        for (AgentSpec& a : inst.agents)
            if (a.group == ec.group) a.active = ec.kind != "fault";
    }

    PeriodStrategy x(st.agents, st.slots, st.paths);
    x.data() = st.x;
    const GameContext ctx{inst.net, inst.price, inst.ext, scn.period};
    const ResidualReport rr = equilibrium_residual(ctx, inst.agents, x, st.theta);
    const double threshold = scn.tol * rr.mean_cost;
    const bool pass = rr.max_residual <= threshold;
    std::printf("t=%d: max residual %.6g (agent %d), threshold %.6g -> %s\n", st.t,
                rr.max_residual, rr.argmax_agent, threshold,
                pass ? "epsilon-equilibrium" : "not an equilibrium");
    return pass ? kExitOk : kExitValidation;
}

int cmd_demo(const Options& opt, bool to_file) {
    const std::string text = demo_scenario_text();
    if (to_file) {
        std::filesystem::create_directories(opt.out_dir);
        const std::string path = opt.out_dir + "/demo.scn";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << text;
        std::cout << "wrote " << path << "\n";
    } else {
        std::cout << text;
    }
    return kExitOk;
}

MetricsTable read_metrics_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open metrics file: " + path);
    MetricsTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("metrics file is empty");
    std::stringstream head(line);
    std::string cell;
    while (std::getline(head, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        table.columns.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            row.push_back(cell.empty() ? std::nan("") : std::stod(cell));
        }
        while (row.size() < table.columns.size()) row.push_back(std::nan(""));
        table.rows.push_back(std::move(row));
    }
    return table;
}

int cmd_plot(const Options& opt) {
    const MetricsTable table = read_metrics_csv(opt.metrics_path);
    std::filesystem::create_directories(opt.out_dir);
    for (const std::string& p : write_standard_plots(opt.out_dir, table))
        std::cout << "wrote " << p << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Receding-horizon data routing simulator"};
    app.require_subcommand(1);
    Options opt;
    bool demo_to_file = false;

    auto add_common = [&](CLI::App* cmd, bool need_scenario) {
        auto* s = cmd->add_option("--scenario", opt.scenario, "scenario file, or - for stdin");
        if (need_scenario) s->required();
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--gamma", opt.gamma, "override update sweeps per step");
        cmd->add_option("--steps", opt.steps, "override horizon length");
        cmd->add_option("--seed", opt.seed, "override population seed");
        cmd->add_option("--tol", opt.tol, "override convergence tolerance");
    };

    CLI::App* c_run = app.add_subcommand("run", "run a scenario and write metrics");
    add_common(c_run, true);
    c_run->add_flag("--dump-trajectory", opt.dump_trajectory, "write trajectory.jsonl + events.jsonl");
    c_run->add_flag("--svg", opt.svg, "write SVG charts next to the metrics");

    CLI::App* c_val = app.add_subcommand("validate", "check a scenario without running it");
    add_common(c_val, true);

    CLI::App* c_eq = app.add_subcommand("equilibrium-check",
                                        "evaluate the final dumped state against the oracle");
    add_common(c_eq, true);
    c_eq->add_option("--dump", opt.dump_path, "trajectory dump path")->required();

    CLI::App* c_demo = app.add_subcommand("demo", "emit the shipped demo scenario");
    c_demo->add_option("--out", opt.out_dir, "write demo.scn into this directory instead of stdout")
        ->each([&](const std::string&) { demo_to_file = true; });

    CLI::App* c_plot = app.add_subcommand("plot", "render charts from a metrics CSV");
    c_plot->add_option("--metrics", opt.metrics_path, "metrics.csv path")->required();
    c_plot->add_option("--out", opt.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        if (c_run->parsed()) return cmd_run(opt);
        if (c_val->parsed()) return cmd_validate(opt);
        if (c_eq->parsed()) return cmd_equilibrium_check(opt);
        if (c_demo->parsed()) return cmd_demo(opt, demo_to_file);
        if (c_plot->parsed()) return cmd_plot(opt);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}

}  // namespace routegame
