// Acceptance suite for the demo experiment and the library-level guarantees.
// Prints one PASS/FAIL line per criterion and exits nonzero on any failure.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <set>
#include <string>

#include "helpers.hpp"
#include "routegame/io.hpp"

using namespace routegame;
using namespace routegame::testing;

namespace {

struct Gate {
    bool all_pass = true;
    void line(int n, const char* name, bool ok, const std::string& detail) {
        std::printf("%s  criterion %d: %-28s %s\n", ok ? "PASS" : "FAIL", n, name,
                    detail.c_str());
        all_pass = all_pass && ok;
    }
};

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// Event-free step ranges of the demo run.
std::vector<std::pair<int, int>> demo_segments(const Scenario& scn) {
    std::vector<std::pair<int, int>> segs;
    int begin = 0;
    for (const EventConfig& ev : scn.events) {
        segs.emplace_back(begin, ev.time - 1);
        begin = ev.time;
    }
    segs.emplace_back(begin, scn.steps);
    return segs;
}

// Simpson's rule split at the price table's breakpoints; exact for a
// piecewise-linear integrand up to rounding, and independent of the closed
// form it checks.
double quadrature(const PriceModel& price, const std::vector<double>& breaks, double v) {
    std::vector<double> cuts{0.0};
    for (double b : breaks)
        if (b > 0.0 && b < v) cuts.push_back(b);
    cuts.push_back(v);
    double total = 0.0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        total += (b - a) / 6.0 * (price(a) + 4.0 * price(0.5 * (a + b)) + price(b));
    }
    return total;
}

}  // namespace

int main() {
    Gate gate;
    const Scenario demo = parse_scenario_text(demo_scenario_text(), "demo");
    const auto segs = demo_segments(demo);

    // One gamma=1 reference run, shared by criteria 1, 2, 3 and 7.
    const auto wall0 = std::chrono::steady_clock::now();
    const RunOutputs g1 = run_scenario(demo);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    const GameContext ctx{g1.instance.net, g1.instance.price, g1.instance.ext, demo.period};

    {  // 1: monotone potential and wall-clock budget
        const bool ok = g1.traj.worst_monotonicity_gap <= 1e-9 && secs < 60.0;
        gate.line(1, "monotone potential", ok,
                  fmt("(worst increase %.3g, run %.2fs)", g1.traj.worst_monotonicity_gap, secs));
    }
    {  // 2: feasibility invariance and rolling conservation
        const double audit = conservation_audit(g1.traj, g1.instance.agents, g1.events);
        const bool ok = g1.traj.worst_feasibility <= 1e-9 && audit <= 1e-9;
        gate.line(2, "feasibility invariance", ok,
                  fmt("(worst violation %.3g, audit %.3g)", g1.traj.worst_feasibility, audit));
    }
    std::vector<ConvergenceReport> reports;
    {  // 3: convergence to equilibrium in every event-free segment
        bool ok = true;
        std::string detail;
        for (const auto& [b, e] : segs) {
            const ConvergenceReport rep = convergence_report(g1.traj, 1e-6, b, e);
            reports.push_back(rep);
            const ResidualReport rr =
                equilibrium_residual(ctx, g1.instance.agents, g1.traj.phi[e], e % demo.period);
            const bool seg_ok = rep.converged && rep.periodicity_defect <= 1e-5 &&
                                rr.max_residual <= 1e-6 * rr.mean_cost;
            ok = ok && seg_ok;
            detail += fmt("[%d,%d]: t*=%d defect %.2g residual %.2g; ", b, e,
                          rep.converged ? rep.t_star : -1, rep.periodicity_defect,
                          rr.max_residual);
        }
        gate.line(3, "segment convergence", ok, "(" + detail + ")");
    }
    {  // 4: swap sign coupling and strict potential decrease
        std::mt19937_64 rng(20240817);
        long probes = 0, sign_violations = 0, decrease_violations = 0, positive = 0;
        while (probes < 10000) {
            const Fixture fx = random_fixture(rng);
            const PeriodStrategy x = random_feasible(rng, fx);
            const GameContext fctx = fx.ctx();
            for (int rep = 0; rep < 5 && probes < 10000; ++rep) {
                const int i = draw_int(rng, 0, static_cast<int>(fx.agents.size()) - 1);
                const AgentSpec& a = fx.agents[i];
                if (a.path_ids.empty()) break;
                const int phase = draw_int(rng, 0, fx.period - 1);
                const auto pairs = availability_set(a, phase, fx.period);
                const auto& pr = pairs[draw_int(rng, 0, static_cast<int>(pairs.size()) - 1)];
                const SwapTuple s{
                    pr.first, pr.second,
                    a.path_ids[draw_int(rng, 0, static_cast<int>(a.path_ids.size()) - 1)],
                    a.path_ids[draw_int(rng, 0, static_cast<int>(a.path_ids.size()) - 1)]};
                if (s.to_slot == s.from_slot && s.to_path == s.from_path) continue;
                ++probes;
                const double gain = swap_gain(fctx, fx.agents, x, i, s, phase);
                const double amount = swap_amount(fctx, fx.agents, x, i, s, phase);
                if ((amount > 0.0) != (gain > 0.0)) ++sign_violations;
                if (amount > 0.0) {
                    ++positive;
                    const PeriodStrategy y = apply_swap(x, a, s, amount);
                    if (potential(fctx, y, phase) - potential(fctx, x, phase) >= 1e-12)
                        ++decrease_violations;
                }
            }
        }
        const bool ok = sign_violations == 0 && decrease_violations == 0 && positive > 1000;
        gate.line(4, "strict decrease", ok,
                  fmt("(%ld probes, %ld positive, %ld sign / %ld decrease violations)", probes,
                      positive, sign_violations, decrease_violations));
    }
    {  // 5: oracle agreement on randomized small instances
        std::mt19937_64 rng(424242);
        int instances = 0, disagreements = 0, fixed_points = 0;
        double worst_grid_gap = 0.0;
        bool grid_ok = true;
        while (instances < 200) {
            Fixture fx = random_fixture(rng);
            ++instances;
            Population agents = fx.agents;
            const GameContext fctx = fx.ctx();
            const PeriodStrategy x0 = random_feasible(rng, fx);
            const Trajectory traj = run(fctx, agents, x0, 50, {}, 1);
            const int last = traj.steps();
            const int pre_phase = (last - 1 + fx.period) % fx.period;
            const CrossCheck cc =
                fixed_point_cross_check(fctx, agents, traj.phi[last], pre_phase, 1e-8);
            if (!cc.agree) ++disagreements;
            if (cc.fixed_point) ++fixed_points;

            // Brute-force comparison on a six-cell agent whose rate cap is a
            // multiple of the grid step, so the grid can express the
            // continuous optimum's saturated cells.
            {
                Fixture gx;
                const int links = draw_int(rng, 1, 3);
                gx.net = parallel_net(links);
                gx.period = draw_int(rng, 1, 3);
                gx.ext = ExternalLoad::zeros(links, gx.period);
                const int eta = draw_int(rng, 0, std::min(6 / links, gx.period) - 1);
                std::vector<int> all;
                for (int p = 0; p < links; ++p) all.push_back(p);
                const double demand = 1.0;
                double mu = 0.1 * draw_int(rng, 4, 12);
                while (mu * (eta + 1) * links < demand) mu += 0.1;
                gx.agents.push_back(make_agent(0, demand, eta,
                                               draw_int(rng, 0, gx.period - 1), mu, all));
                gx.agents.push_back(make_agent(1, 0.0, gx.period - 1, 0, 8.0, all));
                PeriodStrategy noise = gx.zero();
                for (int tau = 0; tau < gx.period; ++tau)
                    for (int p = 0; p < links; ++p) noise.at(1, tau, p) = draw_real(rng, 0.0, 4.0);
                const GameContext gctx = gx.ctx();
                const auto prices = path_prices_all(gctx, link_traffic_all(gctx, noise, 0));
                double max_price = 0.0;
                for (double p : prices.v) max_price = std::max(max_price, p);
                const double greedy = frozen_best_response(gctx, gx.agents, noise, 0, 0).cost;
                const double grid = grid_search_cost(gctx, gx.agents, noise, 0, 0);
                const double gap = grid - greedy;
                worst_grid_gap = std::max(worst_grid_gap, std::abs(gap));
                if (gap < -1e-9 || gap > (demand / 10.0) * max_price + 1e-9) grid_ok = false;
            }
        }
        const bool ok = disagreements == 0 && grid_ok && fixed_points >= 100;
        gate.line(5, "oracle agreement", ok,
                  fmt("(%d instances, %d fixed points, %d disagreements, grid gap %.3g)",
                      instances, fixed_points, disagreements, worst_grid_gap));
    }
    {  // 6: more sweeps converge at least as fast, strictly sooner
        Scenario fast = demo;
        fast.gamma = 2;
        const RunOutputs g2 = run_scenario(fast);
        bool pointwise = true;
        double worst_gap = 0.0;
        for (int t = segs[0].first; t <= segs[0].second; ++t) {
            const double gap = g2.traj.v_pred[t] - g1.traj.v_pred[t];
            worst_gap = std::max(worst_gap, gap);
            pointwise = pointwise && gap <= 1e-9;
        }
        const ConvergenceReport rep2 = convergence_report(g2.traj, 1e-6, segs[0].first, segs[0].second);
        const bool ok = pointwise && rep2.converged && reports[0].converged &&
                        rep2.t_star < reports[0].t_star;
        gate.line(6, "gamma ordering", ok,
                  fmt("(pointwise gap %.3g, t* %d vs %d)", worst_gap,
                      rep2.converged ? rep2.t_star : -1, reports[0].t_star));
    }
    {  // 7: fault adaptivity
        const bool reconverged = reports.size() == 3 && reports[1].converged && reports[2].converged;
        bool cheaper_during_fault = true;
        std::string detail;
        for (int id : {4, 5}) {
            const double before =
                local_cost(ctx, g1.instance.agents, g1.traj.phi[segs[0].second], id,
                           segs[0].second % demo.period);
            const double during =
                local_cost(ctx, g1.instance.agents, g1.traj.phi[segs[1].second], id,
                           segs[1].second % demo.period);
            cheaper_during_fault = cheaper_during_fault && during < before;
            detail += fmt("J_%d %.4g->%.4g; ", id, before, during);
        }
        std::vector<std::pair<double, int>> ranked;
        for (int t = 1; t <= g1.traj.steps(); ++t) ranked.emplace_back(g1.traj.delta_phi[t], t);
        std::sort(ranked.rbegin(), ranked.rend());
        const std::set<int> top2{ranked[0].second, ranked[1].second};
        const std::set<int> expected{demo.events[0].time, demo.events[1].time};
        const bool peaks = top2 == expected;
        gate.line(7, "fault adaptivity", reconverged && cheaper_during_fault && peaks,
                  "(" + detail + fmt("peaks at %d,%d)", ranked[0].second, ranked[1].second));
    }
    {  // 8: unit identities
        std::mt19937_64 rng(99);
        bool rotate_ok = true, potential_ok = true;
        for (int trial = 0; trial < 30; ++trial) {
            const Fixture fx = random_fixture(rng);
            const PeriodStrategy x = random_feasible(rng, fx);
            PeriodStrategy y = x;
            for (int k = 0; k < fx.period; ++k) y = rotate(y);
            rotate_ok = rotate_ok && y == x;
            potential_ok =
                potential_ok && potential(fx.ctx(), rotate(x), 0) == potential(fx.ctx(), x, 0);
        }
        double worst_quad = 0.0;
        const PriceModel lin = PriceModel::linear(1.7);
        const PriceModel pw = PriceModel::piecewise({0, 1, 2.5, 4}, {0.2, 0.2, 3.0, 5.5});
        for (int k = 0; k < 100; ++k) {
            const double v = 6.0 * k / 99.0;
            worst_quad = std::max(worst_quad, std::abs(lin.integral(v) - quadrature(lin, {}, v)));
            worst_quad = std::max(
                worst_quad, std::abs(pw.integral(v) - quadrature(pw, {1, 2.5, 4}, v)));
        }
        const bool ok = rotate_ok && potential_ok && worst_quad <= 1e-12;
        gate.line(8, "unit identities", ok, fmt("(quadrature gap %.3g)", worst_quad));
    }

    std::printf("%s\n", gate.all_pass ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
    return gate.all_pass ? 0 : 1;
}
