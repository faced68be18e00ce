#include "routegame/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace routegame {

namespace {

std::vector<double> implemented_slice(const PeriodStrategy& x) {
    const int N = x.agent_count();
    const int P = x.path_count();
    std::vector<double> slice(static_cast<size_t>(N) * P);
    for (int i = 0; i < N; ++i) {
        auto row = x.cell_row(i, 0);
        std::copy(row.begin(), row.end(), slice.begin() + static_cast<size_t>(i) * P);
    }
    return slice;
}

double slice_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double q = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        q += d * d;
    }
    return std::sqrt(q);
}

void record_step(Trajectory& traj, const GameContext& ctx, const Population& agents,
                 const PeriodStrategy& x, int t, bool event_applied) {
    const int T = ctx.period;
    traj.theta.push_back(t % T);
    traj.v_pred.push_back(potential(ctx, x, t % T));
    traj.psi.push_back(implemented_slice(x));
    if (t >= T - 1) {
        PeriodStrategy window(x.agent_count(), T, x.path_count());
        for (int j = 0; j < T; ++j) {
            const auto& slice = traj.psi[t - T + 1 + j];
            for (int i = 0; i < x.agent_count(); ++i)
                for (int p = 0; p < x.path_count(); ++p)
                    window.at(i, j, p) = slice[static_cast<size_t>(i) * x.path_count() + p];
        }
        traj.v_impl.push_back(potential(ctx, window, (t - T + 1) % T));
    } else {
        traj.v_impl.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    traj.event_step.push_back(event_applied ? 1 : 0);
    const FeasibilityReport feas = feasibility_check(ctx, agents, x, t % ctx.period);
    traj.feas_violation.push_back(feas.worst_violation);
    traj.worst_feasibility = std::max(traj.worst_feasibility, feas.worst_violation);
    if (t == 0) {
        traj.delta_phi.push_back(0.0);
    } else {
        traj.delta_phi.push_back(tensor_distance(x, traj.phi.back()));
        if (!event_applied) {
            const double gap = traj.v_pred[t] - traj.v_pred[t - 1];
            traj.worst_monotonicity_gap = std::max(traj.worst_monotonicity_gap, gap);
        }
    }
    traj.phi.push_back(x);
}

}  // namespace

PeriodStrategy rotate(const PeriodStrategy& x) {
    const int T = x.slot_count();
    PeriodStrategy out(x.agent_count(), T, x.path_count());
    for (int i = 0; i < x.agent_count(); ++i)
        for (int s = 0; s < T; ++s) {
            auto src = x.cell_row(i, (s + 1) % T);
            auto dst = out.cell_row(i, s);
            std::copy(src.begin(), src.end(), dst.begin());
        }
    return out;
}

RHState rh_step(const GameContext& ctx, const Population& agents, const RHState& state,
                int gamma, ExecMode mode) {
    RHState next{rotate(state.x), phase_step(state.phase, ctx.period)};
    population_update_inplace(ctx, agents, next.x, state.phase, gamma, mode);
    return next;
}

Trajectory run(const GameContext& ctx, Population& agents, const PeriodStrategy& initial,
               int steps, const std::vector<EventSpec>& events, int gamma, ExecMode mode) {
    {
        const FeasibilityReport feas = feasibility_check(ctx, agents, initial, 0);
        if (!feas.ok) throw std::invalid_argument("initial strategy is not feasible at phase 0");
    }
    Trajectory traj;
    traj.period = ctx.period;
    traj.agent_count = initial.agent_count();
    traj.path_count = initial.path_count();

    PeriodStrategy x = initial;
    record_step(traj, ctx, agents, x, 0, false);

    for (int t = 1; t <= steps; ++t) {
        const int prev_phase = (t - 1) % ctx.period;
        bool event_applied = false;
        for (const EventSpec& ev : events) {
            if (ev.time != t) continue;
            event_applied = true;
            for (int id : ev.agents) {
                AgentSpec& a = agents[id];
                auto slice = x.agent_slice(id);
                std::fill(slice.begin(), slice.end(), 0.0);
                if (ev.kind == EventKind::Fault) {
                    a.active = false;
                } else {
                    a.active = true;
                    fill_agent_window(x, a, prev_phase);
                }
            }
        }
        x = rotate(x);
        population_update_inplace(ctx, agents, x, prev_phase, gamma, mode);
        record_step(traj, ctx, agents, x, t, event_applied);
    }
    return traj;
}

ConvergenceReport convergence_report(const Trajectory& traj, double tol, int t_begin,
                                     int t_end) {
    ConvergenceReport report;
    if (traj.phi.empty()) return report;
    const int T = traj.period;
    const int last = static_cast<int>(traj.phi.size()) - 1;
    if (t_end < 0 || t_end > last) t_end = last;
    t_begin = std::clamp(t_begin, 0, t_end);

    // Update-map residual: zero exactly when the revision pass changed
    // nothing and the step was a pure rotation.
    std::vector<double> residual(t_end + 1, 0.0);
    for (int t = t_begin + 1; t <= t_end; ++t)
        residual[t] = tensor_distance(traj.phi[t], rotate(traj.phi[t - 1]));
    if (t_end > t_begin) report.last_update_norm = residual[t_end];

    for (int t = t_begin; t + T <= t_end; ++t) {
        bool quiet = true;
        for (int u = t + 1; u <= t + T && quiet; ++u) quiet = residual[u] <= tol;
        if (quiet) {
            report.converged = true;
            report.t_star = t;
            break;
        }
    }
    if (!report.converged) return report;

    for (int t = report.t_star; t + T <= t_end; ++t)
        report.periodicity_defect = std::max(
            report.periodicity_defect, slice_distance(traj.psi[t + T], traj.psi[t]));
    return report;
}

}  // namespace routegame
