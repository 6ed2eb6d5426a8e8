#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "iclh/config.hpp"
#include "iclh/dataset.hpp"
#include "iclh/log_gamma.hpp"
#include "iclh/partition.hpp"

namespace iclh {

/// Exact ICL split into its two terms.
struct IclValue {
    double log_p_x_given_z = 0.0;
    double log_p_z_given_alpha = 0.0;
    double total = 0.0;
    bool includes_data_constant = false;
};

/// log p(Z | alpha) under a symmetric Dirichlet prior on the cluster
/// proportions. Bipartitions get one factor per side. Throws
/// std::domain_error unless alpha > 0.
double log_p_z(const Partition& p, double alpha);

/// One-sided log p(Z | alpha) from cluster sizes (all nonzero).
double log_p_z_sizes(std::span<const std::int64_t> sizes, double alpha);

/// Mutable working partition: labels, sizes and sides stay dense, with
/// cluster indices in [0, k()). Side 0 holds rows (every element of a
/// non-bipartite dataset), side 1 holds columns.
struct Clustering {
    std::vector<int> label;
    std::vector<std::int64_t> size;
    std::vector<int> side;
    int boundary = 0;
    int side_k[2] = {0, 0};
    std::int64_t side_n[2] = {0, 0};

    int k() const { return static_cast<int>(size.size()); }
    int elements() const { return static_cast<int>(label.size()); }
    int element_side(int i) const { return i < boundary ? 0 : 1; }
};

class ModelEngine;
class ModelStats;

/// Immutable per-fit context: dataset, model binding, hyper-parameters and
/// the lookup tables every state of that fit shares.
class ModelContext {
public:
    static std::shared_ptr<const ModelContext> create(std::shared_ptr<const Dataset> ds, ModelKind kind,
                                                      const ResolvedHyper& hyper, double alpha,
                                                      bool include_data_constant = false,
                                                      int cluster_cap = default_cluster_cap);
    ~ModelContext();

    const Dataset& dataset() const { return *dataset_; }
    const std::shared_ptr<const Dataset>& dataset_ptr() const { return dataset_; }
    ModelKind kind() const { return kind_; }
    const ResolvedHyper& hyper() const { return hyper_; }
    double alpha() const { return alpha_; }
    bool include_data_constant() const { return include_constant_; }
    int cluster_cap() const { return cluster_cap_; }
    const ModelEngine& engine() const { return *engine_; }
    /// log Gamma(alpha + m)
    const LogGammaTable& alpha_table() const { return alpha_table_; }
    /// log B(X), the partition-free data constant.
    double data_constant() const { return data_constant_; }

private:
    ModelContext() = default;

    std::shared_ptr<const Dataset> dataset_;
    ModelKind kind_ = ModelKind::Sbm;
    ResolvedHyper hyper_;
    double alpha_ = 1.0;
    bool include_constant_ = false;
    int cluster_cap_ = default_cluster_cap;
    std::unique_ptr<const ModelEngine> engine_;
    LogGammaTable alpha_table_;
    double data_constant_ = 0.0;
};

/// Where clusters went after a move that removed one.
///
/// Removing cluster r renumbers the last cluster into slot r, so callers
/// tracking per-cluster data apply: data[removed] = data[moved_from].
struct ClusterRemoval {
    int removed = -1;
    int moved_from = -1;
    bool happened() const { return removed >= 0; }
};

struct MergeOutcome {
    int merged = -1;  ///< index of the merged cluster (min of the pair)
    ClusterRemoval removal;
};

/// A partition together with the model's sufficient statistics, kept equal
/// to their from-scratch values under swaps and merges.
///
/// Single writer. Const members may be called concurrently on a state
/// nobody is mutating. Copies clone the statistics and share the context.
class IclState {
public:
    IclState(std::shared_ptr<const ModelContext> ctx, const Partition& p);
    IclState(std::shared_ptr<const Dataset> ds, const Partition& p, ModelKind kind, const ModelHyper& hyper,
             double alpha, bool include_data_constant = false);
    IclState(const IclState& other);
    IclState& operator=(const IclState& other);
    IclState(IclState&&) noexcept;
    IclState& operator=(IclState&&) noexcept;
    ~IclState();

    const ModelContext& context() const { return *ctx_; }
    const std::shared_ptr<const ModelContext>& context_ptr() const { return ctx_; }
    const Clustering& clustering() const { return clustering_; }
    int k() const { return clustering_.k(); }
    int cluster_of(int i) const { return clustering_.label[static_cast<std::size_t>(i)]; }

    IclValue icl() const;
    double log_p_x() const;
    double log_p_z() const;

    /// ICL change of moving element i to cluster `to`. Emptying the source
    /// cluster is allowed and removes it. nullopt when `to` lies on the other
    /// side of a bipartition.
    std::optional<double> delta_swap(int i, int to) const;

    /// Batched delta_swap for one element; every target must be on the
    /// element's side and differ from its current cluster.
    void swap_deltas(int i, std::span<const int> targets, std::span<double> out) const;

    /// ICL change of merging g and h; nullopt for a cross-side pair.
    std::optional<double> delta_merge(int g, int h) const;

    /// Data-term part of delta_merge, split as a sum of per-cluster cross
    /// terms (merge_cross_term over l outside the pair) plus a pair-local rest.
    double merge_data_delta(int g, int h) const;
    double merge_cross_term(int g, int h, int l) const;
    /// Prior-term part of delta_merge.
    double merge_prior_delta(int g, int h) const;

    ClusterRemoval apply_swap(int i, int to);
    MergeOutcome apply_merge(int g, int h);

    /// alpha-free part of the log-linear small-alpha approximation:
    /// D(Z) - log K + sum log Gamma(n_k) - log Gamma(n), summed over sides.
    double intercept() const;
    /// intercept(after merging g,h) - intercept(); cross-side pairs are an error.
    double intercept_merge_delta(int g, int h) const;

    /// Canonically relabelled copy of the current partition.
    Partition partition() const;

private:
    ClusterRemoval remove_cluster(int r);

    std::shared_ptr<const ModelContext> ctx_;
    Clustering clustering_;
    std::unique_ptr<ModelStats> stats_;
};

/// log p(X | Z) for each model; the state must be bound to that model.
double log_p_x_mom(const IclState& s);
double log_p_x_sbm(const IclState& s);
double log_p_x_dcsbm(const IclState& s);
double log_p_x_dclbm(const IclState& s);
double log_p_x_lbm_bernoulli(const IclState& s);

/// Full evaluation from scratch. Throws ModelMismatch / DataError for an
/// unusable model binding and std::invalid_argument for an invalid partition.
IclValue icl(const Partition& p, std::shared_ptr<const Dataset> ds, const RunConfig& config,
             bool include_data_constant = false);

}  // namespace iclh
