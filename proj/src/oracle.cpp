#include "routegame/oracle.hpp"

#include "routegame/update.hpp"
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace routegame {

namespace {

// Frozen unit prices per (slot, path), computed with plain nested loops on
// purpose: this is the independent route the swap dynamics get checked
// against.
std::vector<double> frozen_cell_prices(const GameContext& ctx, const PeriodStrategy& x,
                                       int phase) {
    const int T = x.slot_count();
    const int L = ctx.net.link_count();
    const int P = ctx.net.path_count();
    const int N = x.agent_count();

    std::vector<double> link_load(static_cast<size_t>(T) * L, 0.0);
    for (int tau = 0; tau < T; ++tau) {
        double* row = &link_load[static_cast<size_t>(tau) * L];
        if (ctx.ext.links > 0) {
            const int ext_phase = (phase + tau) % ctx.period;
            for (int l = 0; l < L; ++l) row[l] = ctx.ext.at(l, ext_phase);
        }
        for (int i = 0; i < N; ++i)
            for (int p = 0; p < P; ++p) {
                const double amount = x.at(i, tau, p);
                if (amount == 0.0) continue;
                for (int l : ctx.net.links_of(p)) row[l] += amount;
            }
    }

    std::vector<double> cell_price(static_cast<size_t>(T) * P, 0.0);
    for (int tau = 0; tau < T; ++tau)
        for (int p = 0; p < P; ++p) {
            double unit = 0.0;
            for (int l : ctx.net.links_of(p)) unit += ctx.price(link_load[static_cast<size_t>(tau) * L + l]);
            cell_price[static_cast<size_t>(tau) * P + p] = unit;
        }
    return cell_price;
}

struct AgentEval {
    double current_cost = 0.0;
    double best_cost = 0.0;
};

AgentEval eval_agent(const std::vector<double>& cell_price, const PeriodStrategy& x,
                     const AgentSpec& a, int phase, int period,
                     std::vector<double>* best_cells) {
    const int T = x.slot_count();
    const int P = x.path_count();
    AgentEval ev;
    for (int tau = 0; tau < T; ++tau)
        for (int p = 0; p < P; ++p)
            ev.current_cost += cell_price[static_cast<size_t>(tau) * P + p] * x.at(a.id, tau, p);

    if (best_cells) best_cells->assign(static_cast<size_t>(T) * P, 0.0);
    if (a.demand <= 0.0) return ev;

    // Greedy fill of the window's cells in ascending unit price, ties in
    // lexicographic (slot, path) order. The frozen objective is linear, so
    // this is the exact minimizer.
    std::vector<std::pair<int, int>> cells;
    for (int tau = 0; tau < T; ++tau) {
        if (!slot_in_window(a, phase, tau, period)) continue;
        for (int p : a.path_ids) cells.emplace_back(tau, p);
    }
    if (a.demand > a.rate_cap * static_cast<double>(cells.size()) + 1e-12)
        throw std::invalid_argument("agent demand exceeds its window capacity");

    std::stable_sort(cells.begin(), cells.end(),
                     [&](const std::pair<int, int>& u, const std::pair<int, int>& v) {
                         return cell_price[static_cast<size_t>(u.first) * P + u.second] <
                                cell_price[static_cast<size_t>(v.first) * P + v.second];
                     });
    double remaining = a.demand;
    for (const auto& [tau, p] : cells) {
        if (remaining <= 0.0) break;
        const double take = std::min(a.rate_cap, remaining);
        ev.best_cost += cell_price[static_cast<size_t>(tau) * P + p] * take;
        if (best_cells) (*best_cells)[static_cast<size_t>(tau) * P + p] = take;
        remaining -= take;
    }
    return ev;
}

}  // namespace

BestResponse frozen_best_response(const GameContext& ctx, const Population& agents,
                                  const PeriodStrategy& x, int i, int phase) {
    const std::vector<double> cell_price = frozen_cell_prices(ctx, x, phase);
    BestResponse br;
    const AgentEval ev = eval_agent(cell_price, x, agents[i], phase, ctx.period, &br.cells);
    br.cost = ev.best_cost;
    return br;
}

ResidualReport equilibrium_residual(const GameContext& ctx, const Population& agents,
                                    const PeriodStrategy& x, int phase, ExecMode mode) {
    const std::vector<double> cell_price = frozen_cell_prices(ctx, x, phase);
    const int N = static_cast<int>(agents.size());
    ResidualReport report;
    report.residual.assign(N, 0.0);
    std::vector<double> costs(N, 0.0);

    const bool par = mode == ExecMode::Parallel;
#ifdef _OPENMP
#pragma omp parallel for if (par && N > 8) schedule(static)
#endif
    for (int i = 0; i < N; ++i) {
        if (!agents[i].active) continue;
        const AgentEval ev = eval_agent(cell_price, x, agents[i], phase, ctx.period, nullptr);
        report.residual[i] = ev.current_cost - ev.best_cost;
        costs[i] = ev.current_cost;
    }
    (void)par;

    int active = 0;
    double cost_sum = 0.0;
    for (int i = 0; i < N; ++i) {
        if (!agents[i].active) continue;
        ++active;
        cost_sum += costs[i];
        if (report.argmax_agent < 0 || report.residual[i] > report.max_residual) {
            report.max_residual = report.residual[i];
            report.argmax_agent = i;
        }
    }
    if (active > 0) report.mean_cost = cost_sum / active;
    return report;
}

CrossCheck fixed_point_cross_check(const GameContext& ctx, const Population& agents,
                                   const PeriodStrategy& x, int phase, double eps) {
    CrossCheck cc;
    const PeriodStrategy next = population_update(ctx, agents, x, phase, 1);
    cc.fixed_point = next == x;

    const int shifted = (phase + 1) % ctx.period;
    const ResidualReport rr = equilibrium_residual(ctx, agents, x, shifted);
    for (const AgentSpec& a : agents)
        if (a.active && a.offset == shifted)
            cc.aligned_residual = std::max(cc.aligned_residual, rr.residual[a.id]);

    cc.agree = !(cc.fixed_point && cc.aligned_residual > eps);
    cc.pass = cc.fixed_point && cc.aligned_residual <= eps;
    return cc;
}

}  // namespace routegame
