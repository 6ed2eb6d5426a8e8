#include "iclh/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "search/merge_cache.hpp"

namespace iclh {

PairMask::PairMask(int k) : rows_(static_cast<std::size_t>(k), std::vector<char>(static_cast<std::size_t>(k), 0)) {}

void PairMask::allow(int a, int b) {
    rows_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
    rows_[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
}

void PairMask::merge(int keep, int drop) {
    for (int l = 0; l < k(); ++l) {
        if (l == keep || l == drop || !allowed(drop, l)) continue;
        allow(keep, l);
    }
}

void PairMask::apply(const ClusterRemoval& r) {
    if (!r.happened()) return;
    const auto to = static_cast<std::size_t>(r.removed);
    const auto from = static_cast<std::size_t>(r.moved_from);
    if (to != from) {
        rows_[to] = rows_[from];
        for (auto& row : rows_) row[to] = row[from];
        rows_[to][to] = 0;
    }
    rows_.pop_back();
    for (auto& row : rows_) row.pop_back();
}

void PairMask::add_split(int source) {
    const auto s = static_cast<std::size_t>(source);
    for (auto& row : rows_) row.push_back(row[s]);
    std::vector<char> fresh = rows_[s];
    rows_.push_back(std::move(fresh));
    allow(source, k() - 1);
}

int greedy_swap(IclState& state, MovePolicy& policy, Rng& rng) {
    const int n = state.clustering().elements();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::vector<int> targets;
    std::vector<double> deltas;
    int total = 0;
    for (int sweep = 0; policy.max_sweeps == 0 || sweep < policy.max_sweeps; ++sweep) {
        if (policy.sweep_order == SweepOrder::Shuffled) rng.shuffle(std::span<int>(order));
        int moves = 0;
        for (const int i : order) {
            const Clustering& c = state.clustering();
            const int g = c.label[static_cast<std::size_t>(i)];
            const int side = c.element_side(i);
            targets.clear();
            for (int h = 0; h < c.k(); ++h) {
                if (h == g || c.side[static_cast<std::size_t>(h)] != side) continue;
                if (policy.restrict_to_common_parent && !policy.allowed.allowed(g, h)) continue;
                targets.push_back(h);
            }
            if (targets.empty()) continue;
            deltas.resize(targets.size());
            state.swap_deltas(i, targets, deltas);
            std::size_t best = 0;
            for (std::size_t t = 1; t < targets.size(); ++t) {
                if (deltas[t] > deltas[best]) best = t;
            }
            if (!(deltas[best] > move_epsilon)) continue;
            const ClusterRemoval removal = state.apply_swap(i, targets[best]);
            if (policy.restrict_to_common_parent) policy.allowed.apply(removal);
            ++moves;
        }
        total += moves;
        if (moves == 0) break;
    }
    return total;
}

int greedy_merge(IclState& state, MovePolicy& policy) {
    if (state.k() < 2) return 0;
    MergeCache cache(state, policy);
    int merges = 0;
    for (;;) {
        const auto best = cache.best(state);
        if (!best || !(best->delta > move_epsilon)) break;
        // The cached value drifts by rounding across updates; confirm it.
        const double exact = state.merge_data_delta(best->g, best->h);
        if (std::abs(exact - cache.data(best->g, best->h)) > 1e-7) {
            cache.set(best->g, best->h, exact);
            continue;
        }
        cache.before_merge(state, best->g, best->h);
        if (policy.restrict_to_common_parent) policy.allowed.merge(best->g, best->h);
        const MergeOutcome outcome = state.apply_merge(best->g, best->h);
        if (policy.restrict_to_common_parent) policy.allowed.apply(outcome.removal);
        cache.after_merge(state, outcome, policy);
        ++merges;
    }
    return merges;
}

namespace {

/// parent[k] = the cluster of `parent` containing child cluster k.
std::vector<int> parent_map(const Partition& child, const Partition& parent) {
    if (child.size() != parent.size() || child.row_count() != parent.row_count()) {
        throw std::invalid_argument("partitions cover different element sets");
    }
    std::vector<int> map(static_cast<std::size_t>(child.k()), -1);
    for (int i = 0; i < child.size(); ++i) {
        auto& m = map[static_cast<std::size_t>(child[static_cast<std::size_t>(i)])];
        const int p = parent[static_cast<std::size_t>(i)];
        if (m < 0) {
            m = p;
        } else if (m != p) {
            throw std::invalid_argument("child partition does not refine its parent");
        }
    }
    return map;
}

}  // namespace

PairMask common_parent_mask(const Partition& child, const Partition& p1, const Partition& p2) {
    const auto m1 = parent_map(child, p1);
    const auto m2 = parent_map(child, p2);
    PairMask mask(child.k());
    // Group child clusters by parent so the cost is the number of pairs found.
    for (const auto* m : {&m1, &m2}) {
        const int parents = m == &m1 ? p1.k() : p2.k();
        std::vector<std::vector<int>> groups(static_cast<std::size_t>(std::max(parents, 0)));
        for (int k = 0; k < child.k(); ++k) {
            const int p = (*m)[static_cast<std::size_t>(k)];
            if (p < 0) continue;
            if (p >= parents) throw std::invalid_argument("parent label out of range");
            groups[static_cast<std::size_t>(p)].push_back(k);
        }
        for (const auto& group : groups) {
            for (std::size_t a = 0; a < group.size(); ++a) {
                for (std::size_t b = a + 1; b < group.size(); ++b) mask.allow(group[a], group[b]);
            }
        }
    }
    return mask;
}

std::vector<std::pair<int, int>> common_parent_pairs(const Partition& child, const Partition& p1,
                                                     const Partition& p2) {
    const PairMask mask = common_parent_mask(child, p1, p2);
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < child.k(); ++a) {
        for (int b = a + 1; b < child.k(); ++b) {
            if (mask.allowed(a, b)) out.emplace_back(a, b);
        }
    }
    return out;
}

}  // namespace iclh
