#include "routegame/kernels.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace routegame {

namespace {

// Work sizes below this stay serial; the demo-scale loops are far too small
// to amortize a fork-join.
constexpr long kParGrain = 1 << 14;

}  // namespace

namespace detail {

// Per-path slot totals followed by a per-link gather. Every output element is
// an independent fixed-order sum, which keeps the parallel and serial paths
// bitwise identical.
void slot_traffic_into(const GameContext& ctx, const PeriodStrategy& x, int tau, int phase,
                       std::vector<double>& totals, double* lambda, bool par) {
    const int P = ctx.net.path_count();
    const int L = ctx.net.link_count();
    const int N = x.agent_count();
    const int ext_phase = (phase + tau) % ctx.period;

    const long totals_work = static_cast<long>(P) * N;
#ifdef _OPENMP
#pragma omp parallel for if (par && totals_work > kParGrain) schedule(static)
#endif
    for (int p = 0; p < P; ++p) {
        double s = 0.0;
        for (int i = 0; i < N; ++i) s += x.at(i, tau, p);
        totals[p] = s;
    }

#ifdef _OPENMP
#pragma omp parallel for if (par && totals_work > kParGrain) schedule(static)
#endif
    for (int l = 0; l < L; ++l) {
        double s = ctx.ext.links > 0 ? ctx.ext.at(l, ext_phase) : 0.0;
        for (int p : ctx.net.paths_through[l]) s += totals[p];
        lambda[l] = s;
    }
    (void)totals_work;
    (void)par;
}

}  // namespace detail

namespace {

void check_shape(const GameContext& ctx, const PeriodStrategy& x, int tau, int phase) {
    if (x.path_count() != ctx.net.path_count())
        throw std::invalid_argument("strategy path dimension does not match network");
    if (x.slot_count() != ctx.period)
        throw std::invalid_argument("strategy slot dimension does not match period");
    if (tau < 0 || tau >= x.slot_count()) throw std::invalid_argument("slot out of range");
    if (phase < 0 || phase >= ctx.period) throw std::invalid_argument("phase out of range");
    if (ctx.ext.links > 0 && (ctx.ext.links != ctx.net.link_count() || ctx.ext.slots != ctx.period))
        throw std::invalid_argument("external load shape does not match network/period");
}

}  // namespace

std::vector<double> link_traffic(const GameContext& ctx, const PeriodStrategy& x, int tau,
                                 int phase, ExecMode mode) {
    check_shape(ctx, x, tau, phase);
    std::vector<double> lambda(ctx.net.link_count(), 0.0);
    std::vector<double> totals(ctx.net.path_count(), 0.0);
    detail::slot_traffic_into(ctx, x, tau, phase, totals, lambda.data(),
                              mode == ExecMode::Parallel);
    return lambda;
}

TrafficTable link_traffic_all(const GameContext& ctx, const PeriodStrategy& x, int phase,
                              ExecMode mode) {
    check_shape(ctx, x, 0, phase);
    const int T = x.slot_count();
    const int L = ctx.net.link_count();
    TrafficTable table{T, L, std::vector<double>(static_cast<size_t>(T) * L, 0.0)};
    const bool par = mode == ExecMode::Parallel;
    const long work = static_cast<long>(T) * ctx.net.path_count() * x.agent_count();
#ifdef _OPENMP
#pragma omp parallel for if (par && work > kParGrain) schedule(static)
#endif
    for (int tau = 0; tau < T; ++tau) {
        std::vector<double> totals(ctx.net.path_count(), 0.0);
        detail::slot_traffic_into(ctx, x, tau, phase, totals,
                                  &table.v[static_cast<size_t>(tau) * L], false);
    }
    (void)par;
    (void)work;
    return table;
}

double path_price(const NetworkModel& net, const PriceModel& price,
                  const std::vector<double>& lambda, int p) {
    double s = 0.0;
    for (int l : net.links_of(p)) s += price(lambda[l]);
    return s;
}

PriceTable path_prices_all(const GameContext& ctx, const TrafficTable& traffic, ExecMode mode) {
    const int T = traffic.slots;
    const int P = ctx.net.path_count();
    PriceTable table{T, P, std::vector<double>(static_cast<size_t>(T) * P, 0.0)};
    const bool par = mode == ExecMode::Parallel;
    const long work = static_cast<long>(T) * P;
#ifdef _OPENMP
#pragma omp parallel for if (par && work > kParGrain) schedule(static) collapse(2)
#endif
    for (int tau = 0; tau < T; ++tau)
        for (int p = 0; p < P; ++p) {
            double s = 0.0;
            for (int l : ctx.net.links_of(p)) s += ctx.price(traffic.at(tau, l));
            table.at(tau, p) = s;
        }
    (void)par;
    (void)work;
    return table;
}

double local_cost(const GameContext& ctx, const Population& agents, const PeriodStrategy& x,
                  int i, int phase, ExecMode mode) {
    const TrafficTable traffic = link_traffic_all(ctx, x, phase, mode);
    const AgentSpec& a = agents[i];
    double cost = 0.0;
    for (int tau = 0; tau < x.slot_count(); ++tau) {
        for (int p : a.path_ids) {
            const double amount = x.at(i, tau, p);
            if (amount == 0.0) continue;
            double unit = 0.0;
            for (int l : ctx.net.links_of(p)) unit += ctx.price(traffic.at(tau, l));
            cost += unit * amount;
        }
    }
    return cost;
}

double potential(const GameContext& ctx, const PeriodStrategy& x, int phase, ExecMode mode) {
    check_shape(ctx, x, 0, phase);
    const int T = x.slot_count();
    const int L = ctx.net.link_count();
    std::vector<double> slot_terms(T, 0.0);
    const bool par = mode == ExecMode::Parallel;
    const long work = static_cast<long>(T) * ctx.net.path_count() * x.agent_count();
#ifdef _OPENMP
#pragma omp parallel for if (par && work > kParGrain) schedule(static)
#endif
    for (int tau = 0; tau < T; ++tau) {
        std::vector<double> totals(ctx.net.path_count(), 0.0);
        std::vector<double> lambda(L, 0.0);
        detail::slot_traffic_into(ctx, x, tau, phase, totals, lambda.data(), false);
        double g = 0.0;
        for (int l = 0; l < L; ++l) g += ctx.price.integral(lambda[l]);
        slot_terms[tau] = g;
    }
    (void)par;
    (void)work;
    // Sorted combination: rotating the plan permutes the slot terms, so the
    // total cannot drift by summation order.
    std::sort(slot_terms.begin(), slot_terms.end());
    double v = 0.0;
    for (double g : slot_terms) v += g;
    return v;
}

}  // namespace routegame
