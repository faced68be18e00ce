// Kernel benchmark: serial reference vs the OpenMP variants on a synthetic
// instance large enough for the parallel paths to engage. Also verifies that
// both paths produce bitwise-identical results.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>

#include "routegame/engine.hpp"
#include "routegame/oracle.hpp"
#include "routegame/scenario.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace routegame;

namespace {

struct BenchSetup {
    NetworkModel net;
    Population agents;
    PriceModel price = PriceModel::linear(1.0);
    ExternalLoad ext;
    PeriodStrategy x;
    int period = 0;
};

// corridors parallel one-link routes shared by all groups, private access
// links on both ends, like the demo topology scaled up.
BenchSetup make_setup(int groups, int corridors, int agents_per_group, int period,
                      std::uint64_t seed) {
    BenchSetup s;
    s.period = period;
    NetworkModel& net = s.net;
    net.nodes = groups * 2 + corridors * 2;
    const auto corridor_in = [&](int c) { return groups * 2 + 2 * c; };
    const auto corridor_out = [&](int c) { return groups * 2 + 2 * c + 1; };

    std::vector<std::vector<int>> entry(groups), exit_(groups);
    std::vector<int> corridor_link(corridors);
    for (int g = 0; g < groups; ++g) {
        entry[g].resize(corridors);
        exit_[g].resize(corridors);
        for (int c = 0; c < corridors; ++c) {
            entry[g][c] = net.link_count();
            net.links.emplace_back(g, corridor_in(c));
        }
    }
    for (int c = 0; c < corridors; ++c) {
        corridor_link[c] = net.link_count();
        net.links.emplace_back(corridor_in(c), corridor_out(c));
    }
    for (int g = 0; g < groups; ++g)
        for (int c = 0; c < corridors; ++c) {
            exit_[g][c] = net.link_count();
            net.links.emplace_back(corridor_out(c), groups + g);
        }
    std::vector<std::vector<int>> group_paths(groups);
    for (int g = 0; g < groups; ++g)
        for (int c = 0; c < corridors; ++c) {
            group_paths[g].push_back(net.path_count());
            net.paths.push_back({entry[g][c], corridor_link[c], exit_[g][c]});
        }
    net.finalize();
    net.validate();

    std::mt19937_64 rng(seed);
    for (int g = 0; g < groups; ++g)
        for (int k = 0; k < agents_per_group; ++k) {
            AgentSpec a;
            a.id = static_cast<int>(s.agents.size());
            a.group = "G" + std::to_string(g);
            a.source = g;
            a.sink = groups + g;
            a.rate_cap = 1.0;
            a.window_extent = draw_int(rng, period / 3, period - 1);
            a.offset = draw_int(rng, 0, period - 1);
            a.path_ids = group_paths[g];
            a.demand = draw_real(rng, 0.5, 0.5 * a.window_capacity());
            s.agents.push_back(std::move(a));
        }
    s.ext = ExternalLoad::zeros(net.link_count(), period);
    s.x = initial_strategy(s.agents, period, net.path_count());
    return s;
}

template <typename F>
double time_ms(F&& f, int iters) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < iters; ++k) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / iters;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-24s %10.3f ms %10.3f ms   x%-6.2f %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    int groups = 6, corridors = 32, per_group = 120, period = 24, iters = 5;
    for (int k = 1; k + 1 < argc; k += 2) {
        if (!std::strcmp(argv[k], "--groups")) groups = std::atoi(argv[k + 1]);
        else if (!std::strcmp(argv[k], "--corridors")) corridors = std::atoi(argv[k + 1]);
        else if (!std::strcmp(argv[k], "--agents-per-group")) per_group = std::atoi(argv[k + 1]);
        else if (!std::strcmp(argv[k], "--period")) period = std::atoi(argv[k + 1]);
        else if (!std::strcmp(argv[k], "--iters")) iters = std::atoi(argv[k + 1]);
    }
    BenchSetup s = make_setup(groups, corridors, per_group, period, 99);
    const GameContext ctx{s.net, s.price, s.ext, s.period};
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run the serial path\n");
#endif
    std::printf("agents %zu, links %d, paths %d, period %d\n\n", s.agents.size(),
                s.net.link_count(), s.net.path_count(), s.period);
    std::printf("%-24s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

    {
        TrafficTable a, b;
        const double ts = time_ms([&] { a = link_traffic_all(ctx, s.x, 0, ExecMode::Serial); }, iters);
        const double tp = time_ms([&] { b = link_traffic_all(ctx, s.x, 0, ExecMode::Parallel); }, iters);
        report("link_traffic_all", ts, tp, a.v == b.v);
    }
    {
        const TrafficTable traffic = link_traffic_all(ctx, s.x, 0);
        PriceTable a, b;
        const double ts = time_ms([&] { a = path_prices_all(ctx, traffic, ExecMode::Serial); }, iters);
        const double tp = time_ms([&] { b = path_prices_all(ctx, traffic, ExecMode::Parallel); }, iters);
        report("path_prices_all", ts, tp, a.v == b.v);
    }
    {
        double a = 0, b = 0;
        const double ts = time_ms([&] { a = potential(ctx, s.x, 0, ExecMode::Serial); }, iters);
        const double tp = time_ms([&] { b = potential(ctx, s.x, 0, ExecMode::Parallel); }, iters);
        report("potential", ts, tp, a == b);
    }
    {
        ResidualReport a, b;
        const double ts = time_ms([&] { a = equilibrium_residual(ctx, s.agents, s.x, 0, ExecMode::Serial); }, 1);
        const double tp = time_ms([&] { b = equilibrium_residual(ctx, s.agents, s.x, 0, ExecMode::Parallel); }, 1);
        report("equilibrium_residual", ts, tp, a.residual == b.residual);
    }
    {
        PeriodStrategy a, b;
        const double ts = time_ms([&] { a = population_update(ctx, s.agents, s.x, 0, 1, ExecMode::Serial); }, 1);
        const double tp = time_ms([&] { b = population_update(ctx, s.agents, s.x, 0, 1, ExecMode::Parallel); }, 1);
        report("population_update", ts, tp, a == b);
    }
    return 0;
}
