#include "routegame/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace routegame {

void AgentSpec::validate(const NetworkModel& net, int period) const {
    if (offset < 0 || offset >= period) throw std::invalid_argument("agent offset out of range");
    if (window_extent < 0 || window_extent >= period)
        throw std::invalid_argument("agent window extent out of range");
    if (!(rate_cap > 0.0)) throw std::invalid_argument("agent rate cap must be positive");
    if (!(demand >= 0.0) || !std::isfinite(demand))
        throw std::invalid_argument("agent demand must be finite and nonnegative");
    if (demand > 0.0 && path_ids.empty())
        throw std::invalid_argument("agent with demand has no paths");
    if (demand > window_capacity() + 1e-12)
        throw std::invalid_argument("agent demand exceeds window capacity");
    if (!std::is_sorted(path_ids.begin(), path_ids.end()) ||
        std::adjacent_find(path_ids.begin(), path_ids.end()) != path_ids.end())
        throw std::invalid_argument("agent path ids must be sorted and unique");
    for (int p : path_ids) {
        if (p < 0 || p >= net.path_count()) throw std::invalid_argument("agent path id out of range");
        if (net.path_source(p) != source || net.path_sink(p) != sink)
            throw std::invalid_argument("agent path does not connect its source to its sink");
    }
}

}  // namespace routegame
