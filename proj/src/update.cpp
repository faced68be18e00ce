#include "routegame/update.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace routegame {

namespace {

int clip_lo(int v) { return std::max(v, 0); }

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

struct CandidateSpace {
    // Window fragments at the evaluation phase, ascending and disjoint.
    std::vector<std::pair<int, int>> fragments;
    // Flattened candidate count; tuples are indexed in lexicographic
    // (to_slot, from_slot, to_path, from_path) order including self-swaps,
    // which are skipped during scans.
    std::vector<std::pair<int, int>> pairs;
    int path_choices = 0;

    long size() const { return static_cast<long>(pairs.size()) * path_choices * path_choices; }

    SwapTuple tuple(const AgentSpec& a, long idx) const {
        const int k = path_choices;
        const long pair_idx = idx / (k * k);
        const long rest = idx % (k * k);
        return SwapTuple{pairs[pair_idx].first, pairs[pair_idx].second,
                         a.path_ids[static_cast<size_t>(rest / k)],
                         a.path_ids[static_cast<size_t>(rest % k)]};
    }
};

CandidateSpace candidate_space(const AgentSpec& a, int phase, int period) {
    CandidateSpace cs;
    cs.fragments = availability_fragments(a, phase, period);
    for (const auto& [lo, hi] : cs.fragments)
        for (int tbar = lo; tbar <= hi; ++tbar)
            for (int tund = lo; tund <= hi; ++tund) cs.pairs.emplace_back(tbar, tund);
    std::sort(cs.pairs.begin(), cs.pairs.end());
    cs.path_choices = static_cast<int>(a.path_ids.size());
    return cs;
}

double gain_from_table(const PriceTable& prices, const PeriodStrategy& x, const AgentSpec& a,
                       const SwapTuple& s) {
    const double gap = prices.at(s.from_slot, s.from_path) - prices.at(s.to_slot, s.to_path);
    return gap * (a.rate_cap - x.at(a.id, s.to_slot, s.to_path)) *
           x.at(a.id, s.from_slot, s.from_path);
}

double amount_from_table(const GameContext& ctx, const PriceTable& prices,
                         const PeriodStrategy& x, const AgentSpec& a, const SwapTuple& s) {
    const double gap = prices.at(s.from_slot, s.from_path) - prices.at(s.to_slot, s.to_path);
    const double lipschitz_cap =
        positive_part(gap / (ctx.price.lipschitz() *
                             (ctx.net.path_len[s.to_path] + ctx.net.path_len[s.from_path])));
    return std::min({lipschitz_cap, a.rate_cap - x.at(a.id, s.to_slot, s.to_path),
                     x.at(a.id, s.from_slot, s.from_path)});
}

// Lexicographically first tuple attaining the maximal gain. The parallel
// split combines per-chunk winners by (gain, index), which reproduces the
// serial scan exactly because per-tuple gains are pure functions.
struct ScanResult {
    bool any = false;
    double best = 0.0;
    long best_idx = -1;
};

ScanResult scan_candidates(const CandidateSpace& cs, const PriceTable& prices,
                           const PeriodStrategy& x, const AgentSpec& a, bool par) {
    const long n = cs.size();
    const int k = cs.path_choices;
    ScanResult r;
    if (n == 0 || k == 0) return r;

    // Row pointers are hoisted per slot pair; the per-candidate expression is
    // the same one gain_from_table evaluates, so results match it bitwise.
    auto scan_pairs = [&](size_t pair_lo, size_t pair_hi) {
        ScanResult local;
        for (size_t pi = pair_lo; pi < pair_hi; ++pi) {
            const auto [to_slot, from_slot] = cs.pairs[pi];
            const auto to_mass = x.cell_row(a.id, to_slot);
            const auto from_mass = x.cell_row(a.id, from_slot);
            const double* to_price = &prices.v[static_cast<size_t>(to_slot) * prices.paths];
            const double* from_price = &prices.v[static_cast<size_t>(from_slot) * prices.paths];
            long idx = static_cast<long>(pi) * k * k;
            for (int pa = 0; pa < k; ++pa) {
                const int to_path = a.path_ids[pa];
                const double headroom = a.rate_cap - to_mass[to_path];
                const double price_to = to_price[to_path];
                for (int pb = 0; pb < k; ++pb, ++idx) {
                    const int from_path = a.path_ids[pb];
                    if (to_slot == from_slot && to_path == from_path) continue;
                    const double g = (from_price[from_path] - price_to) * headroom *
                                     from_mass[from_path];
                    if (!local.any || g > local.best) {
                        local.any = true;
                        local.best = g;
                        local.best_idx = idx;
                    }
                }
            }
        }
        return local;
    };

    const size_t pair_count = cs.pairs.size();
#ifdef _OPENMP
    if (par && n > (1L << 14) && pair_count > 1) {
        const int chunks = static_cast<int>(
            std::min<size_t>(static_cast<size_t>(omp_get_max_threads()), pair_count));
        std::vector<ScanResult> partial(chunks);
#pragma omp parallel for schedule(static)
        for (int c = 0; c < chunks; ++c)
            partial[c] = scan_pairs(pair_count * c / chunks, pair_count * (c + 1) / chunks);
        for (const ScanResult& p : partial) {
            if (!p.any) continue;
            if (!r.any || p.best > r.best) r = p;
        }
        return r;
    }
#endif
    (void)par;
    (void)n;
    return scan_pairs(0, pair_count);
}

void apply_swap_inplace(PeriodStrategy& x, const AgentSpec& a, const SwapTuple& s, double delta) {
    double& dst = x.at(a.id, s.to_slot, s.to_path);
    double& src = x.at(a.id, s.from_slot, s.from_path);
    if (delta < 0.0 || delta > a.rate_cap - dst || delta > src)
        throw std::invalid_argument("swap amount violates box or mass bounds");
    // Clamps only absorb half-ulp rounding of the additions.
    dst = std::min(dst + delta, a.rate_cap);
    src = std::max(src - delta, 0.0);
}

// Recomputes one slot's traffic column and price row from scratch. Slot
// values depend only on that slot's tensor content, so a table maintained
// this way stays bitwise equal to a full rebuild.
void refresh_slot(const GameContext& ctx, const PeriodStrategy& x, int tau, int phase,
                  TrafficTable& traffic, PriceTable& prices, std::vector<double>& totals) {
    detail::slot_traffic_into(ctx, x, tau, phase, totals,
                              &traffic.v[static_cast<size_t>(tau) * traffic.links], false);
    for (int p = 0; p < prices.paths; ++p) {
        double s = 0.0;
        for (int l : ctx.net.links_of(p)) s += ctx.price(traffic.at(tau, l));
        prices.at(tau, p) = s;
    }
}

bool agent_update_cached(const GameContext& ctx, const Population& agents, PeriodStrategy& x,
                         int i, int shifted, TrafficTable& traffic, PriceTable& prices,
                         std::vector<double>& totals, bool par) {
    const AgentSpec& a = agents[i];
    if (!a.active) return false;
    const CandidateSpace cs = candidate_space(a, shifted, ctx.period);
    if (cs.size() == 0) return false;
    const ScanResult top = scan_candidates(cs, prices, x, a, par);
    if (!top.any || top.best <= kGainDeadband) return false;
    const SwapTuple s = cs.tuple(a, top.best_idx);
    const double delta = amount_from_table(ctx, prices, x, a, s);
    if (delta <= kGainDeadband) return false;
    apply_swap_inplace(x, a, s, delta);
    refresh_slot(ctx, x, s.to_slot, shifted, traffic, prices, totals);
    if (s.from_slot != s.to_slot)
        refresh_slot(ctx, x, s.from_slot, shifted, traffic, prices, totals);
    return true;
}

}  // namespace

AvailabilityPairs availability_pairs_base(int t1, int t2, int period) {
    AvailabilityPairs pairs;
    const int lo = clip_lo(t1);
    const int hi = std::min(t2, period - 1);
    for (int a = lo; a <= hi; ++a)
        for (int b = lo; b <= hi; ++b) pairs.emplace_back(a, b);
    return pairs;
}

std::vector<std::pair<int, int>> availability_fragments(const AgentSpec& a, int phase,
                                                        int period) {
    std::vector<std::pair<int, int>> fragments;
    for (int shift : {-period, 0, period}) {
        const int lo = clip_lo(a.offset - phase + shift);
        const int hi = std::min(a.offset + a.window_extent - phase + shift, period - 1);
        if (lo <= hi) fragments.emplace_back(lo, hi);
    }
    std::sort(fragments.begin(), fragments.end());
    return fragments;
}

AvailabilityPairs availability_set(const AgentSpec& a, int phase, int period) {
    AvailabilityPairs pairs;
    for (const auto& [lo, hi] : availability_fragments(a, phase, period))
        for (int tbar = lo; tbar <= hi; ++tbar)
            for (int tund = lo; tund <= hi; ++tund) pairs.emplace_back(tbar, tund);
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

double swap_gain(const GameContext& ctx, const Population& agents, const PeriodStrategy& x,
                 int i, const SwapTuple& s, int phase) {
    const PriceTable prices =
        path_prices_all(ctx, link_traffic_all(ctx, x, phase, ExecMode::Serial), ExecMode::Serial);
    return gain_from_table(prices, x, agents[i], s);
}

double swap_amount(const GameContext& ctx, const Population& agents, const PeriodStrategy& x,
                   int i, const SwapTuple& s, int phase) {
    const PriceTable prices =
        path_prices_all(ctx, link_traffic_all(ctx, x, phase, ExecMode::Serial), ExecMode::Serial);
    return amount_from_table(ctx, prices, x, agents[i], s);
}

PeriodStrategy apply_swap(const PeriodStrategy& x, const AgentSpec& a, const SwapTuple& s,
                          double delta) {
    PeriodStrategy out = x;
    apply_swap_inplace(out, a, s, delta);
    return out;
}

SwapSearch best_swaps(const GameContext& ctx, const Population& agents, const PeriodStrategy& x,
                      int i, int shifted_phase, ExecMode mode) {
    const AgentSpec& a = agents[i];
    const CandidateSpace cs = candidate_space(a, shifted_phase, ctx.period);
    SwapSearch out;
    if (cs.size() == 0) return out;

    const PriceTable prices =
        path_prices_all(ctx, link_traffic_all(ctx, x, shifted_phase, mode), mode);
    const ScanResult top = scan_candidates(cs, prices, x, a, mode == ExecMode::Parallel);
    if (!top.any) return out;

    out.any = true;
    out.best_gain = top.best;
    for (long idx = 0; idx < cs.size(); ++idx) {
        const SwapTuple s = cs.tuple(a, idx);
        if (s.to_slot == s.from_slot && s.to_path == s.from_path) continue;
        if (gain_from_table(prices, x, a, s) == top.best) out.maximizers.push_back(s);
    }
    return out;
}

bool agent_update_inplace(const GameContext& ctx, const Population& agents, PeriodStrategy& x,
                          int i, int phase, ExecMode mode) {
    const int shifted = (phase + 1) % ctx.period;
    TrafficTable traffic = link_traffic_all(ctx, x, shifted, mode);
    PriceTable prices = path_prices_all(ctx, traffic, mode);
    std::vector<double> totals(ctx.net.path_count(), 0.0);
    return agent_update_cached(ctx, agents, x, i, shifted, traffic, prices, totals,
                               mode == ExecMode::Parallel);
}

PeriodStrategy agent_update(const GameContext& ctx, const Population& agents,
                            const PeriodStrategy& x, int i, int phase, ExecMode mode) {
    PeriodStrategy out = x;
    agent_update_inplace(ctx, agents, out, i, phase, mode);
    return out;
}

void population_update_inplace(const GameContext& ctx, const Population& agents,
                               PeriodStrategy& x, int phase, int gamma, ExecMode mode) {
    if (gamma < 1) throw std::invalid_argument("gamma must be at least 1");
    // Tables are maintained across the whole composition; after each swap the
    // two touched slots are rebuilt, which equals a full recompute bit for
    // bit. Prices therefore always reflect the strategy of the current agent.
    const int shifted = (phase + 1) % ctx.period;
    TrafficTable traffic = link_traffic_all(ctx, x, shifted, mode);
    PriceTable prices = path_prices_all(ctx, traffic, mode);
    std::vector<double> totals(ctx.net.path_count(), 0.0);
    const bool par = mode == ExecMode::Parallel;
    for (int sweep = 0; sweep < gamma; ++sweep)
        for (size_t i = 0; i < agents.size(); ++i)
            agent_update_cached(ctx, agents, x, static_cast<int>(i), shifted, traffic, prices,
                                totals, par);
}

PeriodStrategy population_update(const GameContext& ctx, const Population& agents,
                                 const PeriodStrategy& x, int phase, int gamma, ExecMode mode) {
    PeriodStrategy out = x;
    population_update_inplace(ctx, agents, out, phase, gamma, mode);
    return out;
}

}  // namespace routegame
