#pragma once

#include <vector>

#include "routegame/kernels.hpp"

namespace routegame {

inline constexpr double kEqualityTol = 1e-9;

struct AgentFeasibility {
    int agent = 0;
    bool ok = true;
    double box_violation = 0.0;   // worst excess outside [0, rate_cap]
    double stray_mass = 0.0;      // largest entry off-window or off-path
    double sum_violation = 0.0;   // |window mass - demand|
    double worst() const;
};

struct FeasibilityReport {
    bool ok = true;
    double worst_violation = 0.0;
    double worst_equality_violation = 0.0;
    std::vector<AgentFeasibility> agents;
};

/// Per-agent feasibility of a plan anchored at `phase`. Box bounds and
/// off-window entries are checked exactly; the window mass must match the
/// demand within eq_tol, summed over the wrapped window image (the union of
/// the window's shifted fragments visible in the horizon). Inactive agents
/// must have an all-zero slice.
FeasibilityReport feasibility_check(const GameContext& ctx, const Population& agents,
                                    const PeriodStrategy& x, int phase,
                                    double eq_tol = kEqualityTol);

}  // namespace routegame
