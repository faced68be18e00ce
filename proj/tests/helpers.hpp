#pragma once

#include <random>
#include <vector>

#include "routegame/engine.hpp"
#include "routegame/oracle.hpp"
#include "routegame/scenario.hpp"

namespace routegame::testing {

struct Fixture {
    NetworkModel net;
    PriceModel price = PriceModel::linear(1.0);
    ExternalLoad ext;
    Population agents;
    int period = 1;

    GameContext ctx() const { return {net, price, ext, period}; }
    PeriodStrategy zero() const {
        return PeriodStrategy(static_cast<int>(agents.size()), period, net.path_count());
    }
};

/// Two nodes joined by `n` parallel links, one single-link path per link.
inline NetworkModel parallel_net(int n) {
    NetworkModel net;
    net.nodes = 2;
    for (int l = 0; l < n; ++l) {
        net.links.emplace_back(0, 1);
        net.paths.push_back({l});
    }
    net.finalize();
    net.validate();
    return net;
}

inline AgentSpec make_agent(int id, double demand, int eta, int offset, double mu,
                            std::vector<int> paths) {
    AgentSpec a;
    a.id = id;
    a.group = "T";
    a.source = 0;
    a.sink = 1;
    a.demand = demand;
    a.window_extent = eta;
    a.offset = offset;
    a.rate_cap = mu;
    a.path_ids = std::move(paths);
    return a;
}

/// Feasible-at-phase-0 strategy with randomized window fills.
inline PeriodStrategy random_feasible(std::mt19937_64& rng, const Fixture& fx) {
    PeriodStrategy x = fx.zero();
    for (const AgentSpec& a : fx.agents) {
        if (!a.active || a.demand <= 0.0) continue;
        std::vector<std::pair<int, int>> cells;
        for (int tau = 0; tau < fx.period; ++tau) {
            if (!slot_in_window(a, 0, tau, fx.period)) continue;
            for (int p : a.path_ids) cells.emplace_back(tau, p);
        }
        std::vector<double> w(cells.size());
        double wsum = 0.0;
        for (double& v : w) { v = 0.05 + draw_real(rng, 0.0, 1.0); wsum += v; }
        std::vector<double> fill(cells.size(), 0.0);
        double leftover = a.demand;
        for (int round = 0; round < 64 && leftover > 1e-13; ++round) {
            double open_w = 0.0;
            for (size_t c = 0; c < cells.size(); ++c)
                if (fill[c] < a.rate_cap) open_w += w[c];
            if (open_w <= 0.0) break;
            double placed = 0.0;
            for (size_t c = 0; c < cells.size(); ++c) {
                if (fill[c] >= a.rate_cap) continue;
                const double want = leftover * w[c] / open_w;
                const double add = std::min(want, a.rate_cap - fill[c]);
                fill[c] += add;
                placed += add;
            }
            leftover -= placed;
            if (placed <= 0.0) break;
        }
        for (size_t c = 0; c < cells.size(); ++c)
            x.at(a.id, cells[c].first, cells[c].second) = fill[c];
    }
    return x;
}

/// Exhaustive-search cost of placing one agent's demand in steps of
/// demand/10, the brute-force counterpart of the frozen best response.
inline double grid_search_cost(const GameContext& ctx, const Population& agents,
                               const PeriodStrategy& x, int i, int phase) {
    const AgentSpec& a = agents[i];
    const auto prices = path_prices_all(ctx, link_traffic_all(ctx, x, phase));
    std::vector<std::pair<int, int>> cells;
    for (int tau = 0; tau < ctx.period; ++tau) {
        if (!slot_in_window(a, phase, tau, ctx.period)) continue;
        for (int p : a.path_ids) cells.emplace_back(tau, p);
    }
    const double step = a.demand / 10.0;
    const int cap_units = static_cast<int>(a.rate_cap / step + 1e-9);
    double best = std::numeric_limits<double>::infinity();
    auto recurse = [&](auto&& self, size_t c, int left, double cost) -> void {
        if (cost >= best) return;
        if (c + 1 == cells.size()) {
            if (left > cap_units && left * step > a.rate_cap + 1e-12) return;
            const auto& [tau, p] = cells[c];
            best = std::min(best, cost + left * step * prices.at(tau, p));
            return;
        }
        const auto& [tau, p] = cells[c];
        for (int q = 0; q <= std::min(left, cap_units); ++q)
            self(self, c + 1, left - q, cost + q * step * prices.at(tau, p));
    };
    if (cells.size() == 1) {
        best = a.demand * prices.at(cells[0].first, cells[0].second);
    } else {
        recurse(recurse, 0, 10, 0.0);
    }
    return best;
}

/// Small randomized instance on parallel links: N <= 4 agents, T <= 4 slots.
inline Fixture random_fixture(std::mt19937_64& rng) {
    Fixture fx;
    const int links = draw_int(rng, 1, 3);
    fx.net = parallel_net(links);
    fx.period = draw_int(rng, 1, 4);
    fx.ext = ExternalLoad::zeros(fx.net.link_count(), fx.period);
    const int n_agents = draw_int(rng, 1, 4);
    for (int i = 0; i < n_agents; ++i) {
        const int eta = draw_int(rng, 0, fx.period - 1);
        const int offset = draw_int(rng, 0, fx.period - 1);
        std::vector<int> paths;
        const int n_paths = draw_int(rng, 1, std::min(2, links));
        const int first = draw_int(rng, 0, links - n_paths);
        for (int p = first; p < first + n_paths; ++p) paths.push_back(p);
        const double mu = 1.0;
        const double cap = mu * (eta + 1) * static_cast<double>(paths.size());
        const double demand = draw_real(rng, 0.3 * cap, 0.7 * cap);
        fx.agents.push_back(make_agent(i, demand, eta, offset, mu, std::move(paths)));
    }
    return fx;
}

}  // namespace routegame::testing
