#pragma once

#include <vector>

#include "routegame/kernels.hpp"

namespace routegame {

/// Cheapest feasible plan slice for one agent with all path prices frozen at
/// the current profile (the agent's own contribution included in the
/// aggregate). Computed with its own traffic and price loops; shares nothing
/// with the swap machinery it cross-checks.
struct BestResponse {
    std::vector<double> cells;  // slots x paths slice for the agent
    double cost = 0.0;
};
BestResponse frozen_best_response(const GameContext& ctx, const Population& agents,
                                  const PeriodStrategy& x, int i, int phase);

struct ResidualReport {
    std::vector<double> residual;  // per agent; 0 for inactive agents
    double max_residual = 0.0;
    int argmax_agent = -1;
    double mean_cost = 0.0;        // mean frozen-price cost over active agents
};

/// Per-agent optimality gap at frozen prices: own cost minus the frozen best
/// response. Nonnegative up to rounding. The profile is an eps-equilibrium
/// iff the max residual is at most eps.
ResidualReport equilibrium_residual(const GameContext& ctx, const Population& agents,
                                    const PeriodStrategy& x, int phase,
                                    ExecMode mode = ExecMode::Parallel);

struct CrossCheck {
    bool fixed_point = false;      // one full update sweep returns x unchanged
    double aligned_residual = 0.0; // max residual over agents whose window
                                   // starts at the shifted phase
    bool agree = true;             // no fixed point with a large residual
    bool pass = false;
};

/// Confronts the update dynamics with the independent oracle. `phase` follows
/// the update-map convention: the plan is interpreted at mod(phase+1, period).
CrossCheck fixed_point_cross_check(const GameContext& ctx, const Population& agents,
                                   const PeriodStrategy& x, int phase, double eps);

}  // namespace routegame
