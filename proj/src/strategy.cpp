#include "routegame/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace routegame {

namespace {

// Sum of squares per slot, combined smallest-first. Rotations permute whole
// slot blocks, so the sorted combination makes the norm rotation-exact.
double norm_from_slot_squares(std::vector<double> sq) {
    std::sort(sq.begin(), sq.end());
    double total = 0.0;
    for (double q : sq) total += q;
    return std::sqrt(total);
}

}  // namespace

double tensor_norm(const PeriodStrategy& x) {
    const int T = x.slot_count();
    std::vector<double> sq(T, 0.0);
    for (int tau = 0; tau < T; ++tau) {
        double q = 0.0;
        for (int i = 0; i < x.agent_count(); ++i)
            for (double v : x.cell_row(i, tau)) q += v * v;
        sq[tau] = q;
    }
    return norm_from_slot_squares(std::move(sq));
}

double tensor_distance(const PeriodStrategy& a, const PeriodStrategy& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("tensor shape mismatch");
    double q = 0.0;
    const auto& va = a.data();
    const auto& vb = b.data();
    for (size_t k = 0; k < va.size(); ++k) {
        const double d = va[k] - vb[k];
        q += d * d;
    }
    return std::sqrt(q);
}

double agent_distance(const PeriodStrategy& a, const PeriodStrategy& b, int agent) {
    if (!a.same_shape(b)) throw std::invalid_argument("tensor shape mismatch");
    auto sa = a.agent_slice(agent);
    auto sb = b.agent_slice(agent);
    double q = 0.0;
    for (size_t k = 0; k < sa.size(); ++k) {
        const double d = sa[k] - sb[k];
        q += d * d;
    }
    return std::sqrt(q);
}

void fill_agent_window(PeriodStrategy& x, const AgentSpec& a, int phase) {
    const int T = x.slot_count();
    auto slice = x.agent_slice(a.id);
    std::fill(slice.begin(), slice.end(), 0.0);
    if (a.demand <= 0.0 || a.path_ids.empty()) return;

    std::vector<std::pair<int, int>> cells;  // (slot, path), lexicographic
    for (int tau = 0; tau < T; ++tau) {
        if (!slot_in_window(a, phase, tau, T)) continue;
        for (int p : a.path_ids) cells.emplace_back(tau, p);
    }
    if (cells.empty()) throw std::invalid_argument("agent window has no cells");

    // Uniform spread; the water-fill loop only matters if demand exceeds the
    // uniform per-cell cap, which a valid agent never does.
    double remaining = a.demand;
    size_t open = cells.size();
    std::vector<double> fill(cells.size(), 0.0);
    while (remaining > 0.0 && open > 0) {
        const double u = remaining / static_cast<double>(open);
        const double take = std::min(u, a.rate_cap);
        double placed = 0.0;
        size_t still_open = 0;
        for (size_t c = 0; c < cells.size(); ++c) {
            if (fill[c] >= a.rate_cap) continue;
            const double add = std::min(take, a.rate_cap - fill[c]);
            fill[c] += add;
            placed += add;
            if (fill[c] < a.rate_cap) ++still_open;
        }
        remaining -= placed;
        if (placed <= 0.0) break;
        if (take >= u) break;  // uniform share fit everywhere, done
        open = still_open;
    }
    for (size_t c = 0; c < cells.size(); ++c)
        x.at(a.id, cells[c].first, cells[c].second) = std::min(fill[c], a.rate_cap);
}

}  // namespace routegame
