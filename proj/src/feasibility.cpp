#include "routegame/feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace routegame {

double AgentFeasibility::worst() const {
    return std::max({box_violation, stray_mass, sum_violation});
}

FeasibilityReport feasibility_check(const GameContext& ctx, const Population& agents,
                                    const PeriodStrategy& x, int phase, double eq_tol) {
    if (x.slot_count() != ctx.period)
        throw std::invalid_argument("strategy slot dimension does not match period");
    const int T = x.slot_count();
    const int P = x.path_count();
    FeasibilityReport report;
    report.agents.reserve(agents.size());

    std::vector<char> on_path(P, 0);
    for (const AgentSpec& a : agents) {
        AgentFeasibility f;
        f.agent = a.id;

        std::fill(on_path.begin(), on_path.end(), 0);
        for (int p : a.path_ids) on_path[p] = 1;

        double window_mass = 0.0;
        for (int tau = 0; tau < T; ++tau) {
            const bool in_win = a.active && slot_in_window(a, phase, tau, T);
            auto row = x.cell_row(a.id, tau);
            for (int p = 0; p < P; ++p) {
                const double v = row[p];
                f.box_violation = std::max({f.box_violation, -v, v - a.rate_cap});
                if (in_win && on_path[p])
                    window_mass += v;
                else
                    f.stray_mass = std::max(f.stray_mass, std::abs(v));
            }
        }
        if (a.active) f.sum_violation = std::abs(window_mass - a.demand);
        f.ok = f.box_violation <= 0.0 && f.stray_mass <= 0.0 && f.sum_violation <= eq_tol;

        report.ok = report.ok && f.ok;
        report.worst_violation = std::max(report.worst_violation, f.worst());
        report.worst_equality_violation =
            std::max(report.worst_equality_violation, f.sum_violation);
        report.agents.push_back(std::move(f));
    }
    return report;
}

}  // namespace routegame
