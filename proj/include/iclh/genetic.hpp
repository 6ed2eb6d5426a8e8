#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "iclh/icl.hpp"
#include "iclh/rng.hpp"

namespace iclh {

/// Meet of two partitions: every non-empty intersection of a cluster of p1
/// with a cluster of p2, canonically labelled. Throws std::invalid_argument
/// when the partitions cover different element sets.
Partition cross_partition(const Partition& p1, const Partition& p2);

struct SplitOutcome {
    Partition partition;
    /// Cluster that was split, or -1 when nothing could be split. The new
    /// half carries label partition.k() - 1; other labels are unchanged.
    int split = -1;
};

/// Splits a uniformly chosen cluster of size >= 2 by a fair coin per
/// element, redrawing until both halves are non-empty.
SplitOutcome mutate_split_labelled(const Partition& p, Rng& rng);
Partition mutate_split(const Partition& p, Rng& rng);

/// `count` parent pairs drawn with probability proportional to ICL rank
/// (worst member rank 1; equal values ranked by index). The two members of
/// a pair differ; pairs are drawn with replacement.
std::vector<std::pair<int, int>> rank_select_pairs(std::span<const double> icl, int count, Rng& rng);

struct Member {
    Partition partition;
    IclValue icl;
};

struct Population {
    std::vector<Member> members;
    int generation = 0;
    int best = 0;
};

/// Uniform random assignment into min(k, size) clusters, empty ones
/// dropped. Bipartitions draw k row clusters and k column clusters.
Partition random_partition(const Dataset& ds, int k, Rng& rng);

/// V random partitions, each refined by greedy swaps. Member s draws from
/// the stream (seed, 0, s).
Population init_population(const std::shared_ptr<const ModelContext>& ctx, const RunConfig& config);

struct FitOutcome {
    Partition best;
    IclValue icl;
    /// Best ICL of the initial population and of every later generation.
    std::vector<double> history;
    int generations = 0;
};

/// The hybrid genetic algorithm. Bit-reproducible for a given seed and
/// independent of config.threads.
FitOutcome hybrid_fit(const std::shared_ptr<const ModelContext>& ctx, const RunConfig& config);
FitOutcome hybrid_fit(std::shared_ptr<const Dataset> ds, const RunConfig& config);

/// Greedy hill climbing from one random start: swaps to a local optimum,
/// then merges. Each start has its own random stream.
FitOutcome greedy_fit(const std::shared_ptr<const ModelContext>& ctx, const RunConfig& config, int start = 0);

/// Best of `starts` independent greedy_fit runs; `history` holds the ICL
/// reached by each start.
FitOutcome multistart_greedy_fit(const std::shared_ptr<const ModelContext>& ctx, const RunConfig& config,
                                 int starts);

/// Context for a run configuration: binding checks and resolved defaults.
std::shared_ptr<const ModelContext> make_context(std::shared_ptr<const Dataset> ds, const RunConfig& config,
                                                 bool include_data_constant = false);

}  // namespace iclh
