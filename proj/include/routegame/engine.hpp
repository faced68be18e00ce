#pragma once

#include <string>
#include <vector>

#include "routegame/feasibility.hpp"
#include "routegame/update.hpp"

namespace routegame {

inline constexpr double kMonotonicityTol = 1e-9;
inline constexpr double kConvergenceTol = 1e-6;

inline int phase_step(int phase, int period) { return (phase + 1) % period; }

/// Cyclic shift by one slot: slot s of the result is slot mod(s+1, T) of the
/// input. The slot that just got implemented wraps to the back, which is
/// exactly the periodic extension of the plan.
PeriodStrategy rotate(const PeriodStrategy& x);

struct RHState {
    PeriodStrategy x;
    int phase = 0;
};

/// One receding-horizon step: rotate, then run the population update with
/// availability evaluated at the rotated plan's anchor.
RHState rh_step(const GameContext& ctx, const Population& agents, const RHState& state,
                int gamma, ExecMode mode = ExecMode::Parallel);

enum class EventKind { Fault, Repair };

struct EventSpec {
    int time = 0;
    EventKind kind = EventKind::Fault;
    std::string group;
    std::vector<int> agents;
};

struct Trajectory {
    int period = 0;
    int agent_count = 0;
    int path_count = 0;
    std::vector<PeriodStrategy> phi;        // planned strategy per step
    std::vector<std::vector<double>> psi;   // implemented slice (agents x paths)
    std::vector<int> theta;
    std::vector<double> v_pred;             // potential of phi
    std::vector<double> v_impl;             // potential of the trailing window of
                                            // implemented actions; NaN until one exists
    std::vector<double> delta_phi;          // |phi(t) - phi(t-1)|, 0 at t=0
    std::vector<double> feas_violation;     // worst equality violation per step
    std::vector<char> event_step;           // 1 when an event was applied entering t
    double worst_monotonicity_gap = 0.0;    // max potential increase off events
    double worst_feasibility = 0.0;

    int steps() const { return static_cast<int>(phi.size()) - 1; }
};

/// Runs the receding-horizon loop from a feasible initial plan at phase 0,
/// applying scheduled events. An event at time t takes effect on the plan of
/// step t: faulted agents are deactivated and their slice zeroed (pending
/// data is dropped), repaired agents get their window refilled, and only then
/// is the plan rotated and revised. The population's active flags are
/// mutated in place. Throws std::invalid_argument on an infeasible initial.
Trajectory run(const GameContext& ctx, Population& agents, const PeriodStrategy& initial,
               int steps, const std::vector<EventSpec>& events, int gamma,
               ExecMode mode = ExecMode::Parallel);

struct ConvergenceReport {
    bool converged = false;
    int t_star = -1;                 // first step from which the update map is
                                     // the identity for a full period
    double periodicity_defect = 0.0; // max |psi(t+T) - psi(t)| after t_star
    double last_update_norm = 0.0;   // |phi(end) - rotate(phi(end-1))|
};

/// Convergence detection on trajectory steps t_begin..t_end (inclusive).
/// t_star is the first t such that |phi(t') - rotate(phi(t'-1))| <= tol for
/// the T consecutive steps t' = t+1..t+T, i.e. the update map acted as the
/// identity for a whole rotation cycle.
ConvergenceReport convergence_report(const Trajectory& traj, double tol = kConvergenceTol,
                                     int t_begin = 0, int t_end = -1);

}  // namespace routegame
