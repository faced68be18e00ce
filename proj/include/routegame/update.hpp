#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "routegame/kernels.hpp"

namespace routegame {

/// Comparisons of swap gains and amounts against zero use this dead band to
/// stop floating-point limit cycling near fixed points.
inline constexpr double kGainDeadband = 1e-12;

/// Candidate move of traffic from (from_slot, from_path) to (to_slot, to_path).
struct SwapTuple {
    int to_slot = 0;
    int from_slot = 0;
    int to_path = 0;
    int from_path = 0;
    bool operator==(const SwapTuple&) const = default;
};

using AvailabilityPairs = std::vector<std::pair<int, int>>;

/// Cartesian square of {t1..t2} clipped to {0..period-1}.
AvailabilityPairs availability_pairs_base(int t1, int t2, int period);

/// Contiguous slot ranges of the agent's window visible in a horizon anchored
/// at `phase`, one range per periodic window copy, ascending. At most two.
std::vector<std::pair<int, int>> availability_fragments(const AgentSpec& a, int phase,
                                                        int period);

/// Legal (to_slot, from_slot) pairs at `phase`: the union of the Cartesian
/// squares of the window fragments. Both slots of a pair always lie in the
/// same fragment, so a swap never moves mass between two window instances.
AvailabilityPairs availability_set(const AgentSpec& a, int phase, int period);

/// Gain of a candidate swap: price gap from source to target, scaled by the
/// target's headroom and the source's mass. Nonnegative last two factors.
double swap_gain(const GameContext& ctx, const Population& agents, const PeriodStrategy& x,
                 int i, const SwapTuple& s, int phase);

/// Transfer amount: the price gap divided by the Lipschitz bound on how fast
/// the gap can close, clipped by target headroom and source mass. Positive
/// exactly when the gain is positive.
double swap_amount(const GameContext& ctx, const Population& agents, const PeriodStrategy& x,
                   int i, const SwapTuple& s, int phase);

/// Pure rewrite: target cell gains delta, source cell loses delta, everything
/// else untouched. Throws std::invalid_argument on a precondition breach.
PeriodStrategy apply_swap(const PeriodStrategy& x, const AgentSpec& a, const SwapTuple& s,
                          double delta);

struct SwapSearch {
    bool any = false;          // false when the candidate set is empty
    double best_gain = 0.0;
    std::vector<SwapTuple> maximizers;  // lexicographic order
};

/// All candidate tuples attaining the maximal gain for agent i, with the
/// availability set evaluated at `shifted_phase` (the plan's own anchor).
SwapSearch best_swaps(const GameContext& ctx, const Population& agents, const PeriodStrategy& x,
                      int i, int shifted_phase, ExecMode mode = ExecMode::Parallel);

/// One better-response step of agent i on a plan that has already been
/// rotated: picks the lexicographically smallest maximal-gain tuple and
/// applies its transfer, or leaves the plan unchanged when no gain clears the
/// dead band. `phase` is the pre-rotation phase; availability and prices are
/// evaluated at mod(phase+1, period).
PeriodStrategy agent_update(const GameContext& ctx, const Population& agents,
                            const PeriodStrategy& x, int i, int phase,
                            ExecMode mode = ExecMode::Parallel);
bool agent_update_inplace(const GameContext& ctx, const Population& agents, PeriodStrategy& x,
                          int i, int phase, ExecMode mode = ExecMode::Parallel);

/// gamma sweeps of sequential per-agent updates in index order, prices
/// recomputed after every single agent. The composition order is part of the
/// contract; only the per-agent swap scan parallelizes internally.
PeriodStrategy population_update(const GameContext& ctx, const Population& agents,
                                 const PeriodStrategy& x, int phase, int gamma,
                                 ExecMode mode = ExecMode::Parallel);
void population_update_inplace(const GameContext& ctx, const Population& agents,
                               PeriodStrategy& x, int phase, int gamma,
                               ExecMode mode = ExecMode::Parallel);

}  // namespace routegame
