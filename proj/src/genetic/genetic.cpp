#include "iclh/genetic.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "iclh/local_search.hpp"

namespace iclh {
namespace {

constexpr std::uint64_t selection_slot = std::uint64_t{1} << 40;
constexpr std::uint64_t greedy_stream = std::uint64_t{1} << 41;

/// Runs job(s) for s in [0, count) on up to `threads` workers. Jobs write
/// only to their own slot, so the outcome does not depend on scheduling.
template <class Job>
void run_slots(int count, int threads, Job&& job) {
    const int workers = std::min(threads, count);
    if (workers <= 1) {
        for (int s = 0; s < count; ++s) job(s);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (int s = next++; s < count; s = next++) {
            if (failed) return;
            try {
                job(s);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

int best_index(const std::vector<Member>& members) {
    int best = 0;
    for (int s = 1; s < static_cast<int>(members.size()); ++s) {
        if (members[static_cast<std::size_t>(s)].icl.total > members[static_cast<std::size_t>(best)].icl.total) best = s;
    }
    return best;
}

Partition raw_partition(const IclState& state) {
    const Clustering& c = state.clustering();
    return Partition(c.label, c.k(), c.boundary);
}

Member make_offspring(const std::shared_ptr<const ModelContext>& ctx, const RunConfig& config, const Member& a,
                      const Member& b, Rng& rng) {
    Partition child = cross_partition(a.partition, b.partition);
    if (child.k() > ctx->cluster_cap()) return a.icl.total >= b.icl.total ? a : b;

    MovePolicy policy;
    policy.restrict_to_common_parent = config.common_parent_moves;
    if (policy.restrict_to_common_parent) policy.allowed = common_parent_mask(child, a.partition, b.partition);

    IclState state(ctx, child);
    greedy_merge(state, policy);
    if (rng.uniform() < config.mutation_prob) {
        SplitOutcome split = mutate_split_labelled(raw_partition(state), rng);
        if (split.split >= 0) {
            state = IclState(ctx, split.partition);
            if (policy.restrict_to_common_parent) policy.allowed.add_split(split.split);
        }
    }
    greedy_swap(state, policy, rng);
    return {state.partition(), state.icl()};
}

}  // namespace

Partition cross_partition(const Partition& p1, const Partition& p2) {
    if (p1.size() != p2.size() || p1.row_count() != p2.row_count()) {
        throw std::invalid_argument("partitions cover different element sets");
    }
    std::unordered_map<std::int64_t, int> cells;
    std::vector<int> labels(static_cast<std::size_t>(p1.size()));
    const auto k2 = static_cast<std::int64_t>(std::max(p2.k(), 1));
    for (int i = 0; i < p1.size(); ++i) {
        const std::int64_t key = static_cast<std::int64_t>(p1[static_cast<std::size_t>(i)]) * k2 + p2[static_cast<std::size_t>(i)];
        const auto [it, fresh] = cells.try_emplace(key, static_cast<int>(cells.size()));
        labels[static_cast<std::size_t>(i)] = it->second;
    }
    return Partition(std::move(labels), static_cast<int>(cells.size()), p1.row_count());
}

SplitOutcome mutate_split_labelled(const Partition& p, Rng& rng) {
    const auto sizes = p.cluster_sizes();
    std::vector<int> splittable;
    for (int k = 0; k < p.k(); ++k) {
        if (sizes[static_cast<std::size_t>(k)] >= 2) splittable.push_back(k);
    }
    if (splittable.empty()) return {p, -1};
    const int target = splittable[rng.below(splittable.size())];
    std::vector<int> members;
    for (int i = 0; i < p.size(); ++i) {
        if (p[static_cast<std::size_t>(i)] == target) members.push_back(i);
    }
    std::vector<char> heads(members.size());
    for (;;) {
        std::size_t count = 0;
        for (auto& h : heads) {
            h = rng.coin() ? 1 : 0;
            count += static_cast<std::size_t>(h);
        }
        if (count > 0 && count < members.size()) break;
    }
    std::vector<int> labels = p.assignment();
    for (std::size_t m = 0; m < members.size(); ++m) {
        if (heads[m]) labels[static_cast<std::size_t>(members[m])] = p.k();
    }
    return {Partition(std::move(labels), p.k() + 1, p.row_count()), target};
}

Partition mutate_split(const Partition& p, Rng& rng) { return mutate_split_labelled(p, rng).partition; }

std::vector<std::pair<int, int>> rank_select_pairs(std::span<const double> icl, int count, Rng& rng) {
    const int v = static_cast<int>(icl.size());
    if (v < 2) throw std::invalid_argument("rank selection needs at least two members");
    std::vector<int> order(static_cast<std::size_t>(v));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return icl[static_cast<std::size_t>(a)] < icl[static_cast<std::size_t>(b)];
    });
    // rank[order[r]] = r + 1; cumulative weights in member index order.
    std::vector<std::uint64_t> rank(static_cast<std::size_t>(v));
    for (int r = 0; r < v; ++r) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = static_cast<std::uint64_t>(r) + 1;
    std::vector<std::uint64_t> cumulative(static_cast<std::size_t>(v));
    std::partial_sum(rank.begin(), rank.end(), cumulative.begin());
    const std::uint64_t total = cumulative.back();
    auto draw = [&] {
        const std::uint64_t u = rng.below(total);
        return static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    };
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int c = 0; c < count; ++c) {
        const int a = draw();
        int b = draw();
        while (b == a) b = draw();
        pairs.emplace_back(a, b);
    }
    return pairs;
}

Partition random_partition(const Dataset& ds, int k, Rng& rng) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    const int n = ds.n();
    const int total = ds.element_count();
    std::vector<int> labels(static_cast<std::size_t>(total));
    const int krow = std::min(k, n);
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(krow)));
    if (ds.is_bipartite()) {
        const int kcol = std::min(k, ds.d());
        for (int j = n; j < total; ++j) {
            labels[static_cast<std::size_t>(j)] = krow + static_cast<int>(rng.below(static_cast<std::uint64_t>(kcol)));
        }
    }
    return Partition::from_labels(labels, n);
}

std::shared_ptr<const ModelContext> make_context(std::shared_ptr<const Dataset> ds, const RunConfig& config,
                                                 bool include_data_constant) {
    config.validate();
    if (!ds) throw std::invalid_argument("null dataset");
    check_model_binding(config.model, *ds);
    const ResolvedHyper hyper = resolve_hyper(config.model, config.hyper, *ds);
    return ModelContext::create(std::move(ds), config.model, hyper, config.alpha, include_data_constant,
                                config.cluster_cap);
}

Population init_population(const std::shared_ptr<const ModelContext>& ctx, const RunConfig& config) {
    config.validate();
    Population pop;
    pop.members.resize(static_cast<std::size_t>(config.pop_size));
    run_slots(config.pop_size, config.threads, [&](int s) {
        Rng rng = Rng::stream(config.seed, 0, static_cast<std::uint64_t>(s));
        IclState state(ctx, random_partition(ctx->dataset(), config.initial_k, rng));
        MovePolicy policy;
        greedy_swap(state, policy, rng);
        pop.members[static_cast<std::size_t>(s)] = {state.partition(), state.icl()};
    });
    pop.best = best_index(pop.members);
    return pop;
}

FitOutcome hybrid_fit(const std::shared_ptr<const ModelContext>& ctx, const RunConfig& config) {
    Population pop = init_population(ctx, config);
    FitOutcome out;
    out.history.push_back(pop.members[static_cast<std::size_t>(pop.best)].icl.total);
    int unchanged = 0;
    const int offspring = config.pop_size - 1;
    for (int gen = 1; gen < config.max_generations; ++gen) {
        std::vector<double> values;
        values.reserve(pop.members.size());
        for (const auto& m : pop.members) values.push_back(m.icl.total);
        Rng select = Rng::stream(config.seed, static_cast<std::uint64_t>(gen), selection_slot);
        const auto pairs = rank_select_pairs(values, offspring, select);

        std::vector<Member> next(static_cast<std::size_t>(config.pop_size));
        next[0] = pop.members[static_cast<std::size_t>(pop.best)];
        run_slots(offspring, config.threads, [&](int s) {
            Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(gen), static_cast<std::uint64_t>(s));
            const auto [a, b] = pairs[static_cast<std::size_t>(s)];
            next[static_cast<std::size_t>(s) + 1] =
                make_offspring(ctx, config, pop.members[static_cast<std::size_t>(a)],
                               pop.members[static_cast<std::size_t>(b)], rng);
        });
        pop.members = std::move(next);
        pop.generation = gen;
        pop.best = best_index(pop.members);
        const double best = pop.members[static_cast<std::size_t>(pop.best)].icl.total;
        unchanged = best > out.history.back() ? 0 : unchanged + 1;
        out.history.push_back(best);
        if (config.early_stop && unchanged >= 3) break;
    }
    const Member& best = pop.members[static_cast<std::size_t>(pop.best)];
    out.best = best.partition;
    out.icl = best.icl;
    out.generations = static_cast<int>(out.history.size());
    return out;
}

FitOutcome hybrid_fit(std::shared_ptr<const Dataset> ds, const RunConfig& config) {
    return hybrid_fit(make_context(std::move(ds), config), config);
}

FitOutcome greedy_fit(const std::shared_ptr<const ModelContext>& ctx, const RunConfig& config, int start) {
    Rng rng = Rng::stream(config.seed, greedy_stream, static_cast<std::uint64_t>(start));
    IclState state(ctx, random_partition(ctx->dataset(), config.initial_k, rng));
    MovePolicy policy;
    greedy_swap(state, policy, rng);
    greedy_merge(state, policy);
    FitOutcome out;
    out.best = state.partition();
    out.icl = state.icl();
    out.history.push_back(out.icl.total);
    out.generations = 1;
    return out;
}

FitOutcome multistart_greedy_fit(const std::shared_ptr<const ModelContext>& ctx, const RunConfig& config,
                                 int starts) {
    if (starts < 1) throw std::invalid_argument("starts must be positive");
    std::vector<FitOutcome> runs(static_cast<std::size_t>(starts));
    run_slots(starts, config.threads, [&](int s) { runs[static_cast<std::size_t>(s)] = greedy_fit(ctx, config, s); });
    std::size_t best = 0;
    for (std::size_t s = 1; s < runs.size(); ++s) {
        if (runs[s].icl.total > runs[best].icl.total) best = s;
    }
    FitOutcome out = runs[best];
    out.history.clear();
    for (const auto& r : runs) out.history.push_back(r.icl.total);
    return out;
}

}  // namespace iclh
