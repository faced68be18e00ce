#pragma once

#include <string>
#include <vector>

#include "routegame/network.hpp"

namespace routegame {

/// One periodic transmission task: demand units to deliver inside a window of
/// window_extent+1 slots starting at `offset` within each period, over any of
/// the listed paths, at most rate_cap per (slot, path) cell.
struct AgentSpec {
    int id = 0;
    std::string group;
    int source = 0;
    int sink = 0;
    double demand = 0.0;
    int window_extent = 0;  // window covers offset .. offset+window_extent
    int offset = 0;
    double rate_cap = 1.0;
    std::vector<int> path_ids;  // sorted ascending
    bool active = true;

    int window_slots() const { return window_extent + 1; }
    double window_capacity() const {
        return rate_cap * window_slots() * static_cast<double>(path_ids.size());
    }
    void validate(const NetworkModel& net, int period) const;
};

using Population = std::vector<AgentSpec>;

/// True when slot `slot` of a horizon whose first slot has phase `phase`
/// falls inside the agent's periodic availability window.
inline bool slot_in_window(const AgentSpec& a, int phase, int slot, int period) {
    int r = (slot + phase - a.offset) % period;
    if (r < 0) r += period;
    return r <= a.window_extent;
}

}  // namespace routegame
