#pragma once

#include <span>
#include <vector>

#include "routegame/agents.hpp"

namespace routegame {

/// Dense nonnegative tensor of planned transmissions, agents x slots x paths,
/// agent-major layout. Slot tau of a plan anchored at phase theta refers to
/// absolute time t+tau where mod(t, period) = theta.
class PeriodStrategy {
public:
    PeriodStrategy() = default;
    PeriodStrategy(int agents, int slots, int paths)
        : agents_(agents), slots_(slots), paths_(paths),
          v_(static_cast<size_t>(agents) * slots * paths, 0.0) {}

    int agent_count() const { return agents_; }
    int slot_count() const { return slots_; }
    int path_count() const { return paths_; }

    double at(int i, int tau, int p) const { return v_[index(i, tau, p)]; }
    double& at(int i, int tau, int p) { return v_[index(i, tau, p)]; }

    std::span<const double> cell_row(int i, int tau) const {
        return {v_.data() + index(i, tau, 0), static_cast<size_t>(paths_)};
    }
    std::span<double> cell_row(int i, int tau) {
        return {v_.data() + index(i, tau, 0), static_cast<size_t>(paths_)};
    }
    std::span<const double> agent_slice(int i) const {
        return {v_.data() + index(i, 0, 0), static_cast<size_t>(slots_) * paths_};
    }
    std::span<double> agent_slice(int i) {
        return {v_.data() + index(i, 0, 0), static_cast<size_t>(slots_) * paths_};
    }

    const std::vector<double>& data() const { return v_; }
    std::vector<double>& data() { return v_; }

    bool same_shape(const PeriodStrategy& o) const {
        return agents_ == o.agents_ && slots_ == o.slots_ && paths_ == o.paths_;
    }
    bool operator==(const PeriodStrategy& o) const {
        return same_shape(o) && v_ == o.v_;
    }

private:
    size_t index(int i, int tau, int p) const {
        return (static_cast<size_t>(i) * slots_ + tau) * paths_ + p;
    }

    int agents_ = 0, slots_ = 0, paths_ = 0;
    std::vector<double> v_;
};

/// Exogenous per-link traffic, periodic with the game period. Indexed by the
/// absolute phase of the slot, not by plan-local slot position.
struct ExternalLoad {
    int links = 0;
    int slots = 0;
    std::vector<double> values;  // links x slots

    static ExternalLoad zeros(int links, int slots) {
        return {links, slots, std::vector<double>(static_cast<size_t>(links) * slots, 0.0)};
    }
    double at(int l, int tau) const { return values[static_cast<size_t>(l) * slots + tau]; }
    double& at(int l, int tau) { return values[static_cast<size_t>(l) * slots + tau]; }
};

// Euclidean norm over the whole tensor. Slot partials are combined in sorted
// order, so the value is invariant under slot rotation bit for bit.
double tensor_norm(const PeriodStrategy& x);
double tensor_distance(const PeriodStrategy& a, const PeriodStrategy& b);
double agent_distance(const PeriodStrategy& a, const PeriodStrategy& b, int agent);

/// Clears agent i's slice and spreads its demand uniformly over the window's
/// (slot, path) cells as seen at the given phase, clamping at the rate cap
/// and pushing any overflow to the remaining cells in lexicographic order.
void fill_agent_window(PeriodStrategy& x, const AgentSpec& a, int phase);

}  // namespace routegame
