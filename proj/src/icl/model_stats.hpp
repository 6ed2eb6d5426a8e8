#pragma once

#include <memory>
#include <span>

#include "iclh/icl.hpp"

namespace iclh {

/// Per-state sufficient statistics of one observation model. Every method
/// receives the clustering as it is *before* the mutation it describes.
class ModelStats {
public:
    virtual ~ModelStats() = default;
    virtual std::unique_ptr<ModelStats> clone() const = 0;

    /// log p(X | Z) without the data constant.
    virtual double log_likelihood(const Clustering& c) const = 0;

    virtual void swap_deltas(const Clustering& c, int i, std::span<const int> targets,
                             std::span<double> out) const = 0;
    virtual void apply_swap(const Clustering& c, int i, int to) = 0;

    virtual double merge_delta(const Clustering& c, int keep, int drop) const = 0;
    /// Share of merge_delta(keep, drop) carried by blocks against cluster l.
    virtual double merge_cross_term(const Clustering&, int, int, int) const { return 0.0; }
    /// Folds `drop` into `keep`; `drop` is left empty.
    virtual void apply_merge(const Clustering& c, int keep, int drop) = 0;

    /// Renumbers cluster `from` into the (empty) slot `to`; `from` is the
    /// last cluster and disappears. `c` is the clustering after relabelling.
    virtual void move_cluster(const Clustering& c, int from, int to) = 0;

    /// Recomputes cached terms touching clusters a and b; `c` is current.
    virtual void refresh(const Clustering&, int, int) {}
};

/// Immutable model-wide data shared by all states of a context.
class ModelEngine {
public:
    virtual ~ModelEngine() = default;
    virtual std::unique_ptr<ModelStats> make_stats(const Clustering& c) const = 0;
    virtual double data_constant() const = 0;
};

std::unique_ptr<const ModelEngine> make_mom_engine(const Dataset& ds, const ResolvedHyper& hyper);
std::unique_ptr<const ModelEngine> make_block_engine(const Dataset& ds, ModelKind kind, const ResolvedHyper& hyper);

}  // namespace iclh
