#pragma once

#include <vector>

#include "routegame/network.hpp"
#include "routegame/price.hpp"
#include "routegame/strategy.hpp"

namespace routegame {

struct GameContext {
    const NetworkModel& net;
    const PriceModel& price;
    const ExternalLoad& ext;
    int period;
};

/// Serial runs the reference loops; Parallel enables the OpenMP variants.
/// Both paths compute every output element with the same inner summation
/// order, so results are bitwise identical (see tests/test_parallel.cpp).
enum class ExecMode { Serial, Parallel };

/// Total traffic per link for slot tau of a plan anchored at `phase`:
/// external load at the slot's absolute phase plus all planned transmissions
/// routed over the link.
std::vector<double> link_traffic(const GameContext& ctx, const PeriodStrategy& x, int tau,
                                 int phase, ExecMode mode = ExecMode::Parallel);

struct TrafficTable {
    int slots = 0;
    int links = 0;
    std::vector<double> v;  // slots x links
    double at(int tau, int l) const { return v[static_cast<size_t>(tau) * links + l]; }
    double& at(int tau, int l) { return v[static_cast<size_t>(tau) * links + l]; }
};
TrafficTable link_traffic_all(const GameContext& ctx, const PeriodStrategy& x, int phase,
                              ExecMode mode = ExecMode::Parallel);

/// Price of sending one unit over path p given link traffic `lambda`.
double path_price(const NetworkModel& net, const PriceModel& price,
                  const std::vector<double>& lambda, int p);

struct PriceTable {
    int slots = 0;
    int paths = 0;
    std::vector<double> v;  // slots x paths
    double at(int tau, int p) const { return v[static_cast<size_t>(tau) * paths + p]; }
    double& at(int tau, int p) { return v[static_cast<size_t>(tau) * paths + p]; }
};
PriceTable path_prices_all(const GameContext& ctx, const TrafficTable& traffic,
                           ExecMode mode = ExecMode::Parallel);

/// Cost of agent i over the whole plan: sum over slots and its own paths of
/// unit path price times transmitted amount.
double local_cost(const GameContext& ctx, const Population& agents, const PeriodStrategy& x,
                  int i, int phase, ExecMode mode = ExecMode::Parallel);

/// Sum over slots and links of the integrated price at the slot's traffic.
/// Per-slot partials are added in sorted order so slot rotations leave the
/// value unchanged bit for bit.
double potential(const GameContext& ctx, const PeriodStrategy& x, int phase,
                 ExecMode mode = ExecMode::Parallel);

namespace detail {
// One slot's traffic column, written into lambda (link_count entries).
// totals is scratch of path_count entries. Fixed inner summation order.
void slot_traffic_into(const GameContext& ctx, const PeriodStrategy& x, int tau, int phase,
                       std::vector<double>& totals, double* lambda, bool par);
}  // namespace detail

}  // namespace routegame
