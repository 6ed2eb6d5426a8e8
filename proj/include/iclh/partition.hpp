#pragma once

#include <cstdint>
#include <vector>

namespace iclh {

class Dataset;

/// A hard assignment of elements to clusters.
///
/// For co-clustering the element set is rows {0..n-1} followed by columns
/// {n..n+d-1}; `row_count()` records that boundary and every cluster must
/// hold elements of one side only. For every other dataset row_count()
/// equals size().
///
/// A Partition may hold an invalid assignment (validate_partition reports
/// it); operations that require validity say so.
class Partition {
public:
    Partition() = default;
    Partition(std::vector<int> assignment, int k);
    Partition(std::vector<int> assignment, int k, int row_count);

    /// Builds a partition from arbitrary nonnegative labels, relabelled by
    /// first occurrence. Empty labels disappear.
    static Partition from_labels(const std::vector<int>& labels);
    static Partition from_labels(const std::vector<int>& labels, int row_count);

    const std::vector<int>& assignment() const { return assignment_; }
    int operator[](std::size_t i) const { return assignment_[i]; }
    int k() const { return k_; }
    int size() const { return static_cast<int>(assignment_.size()); }
    int row_count() const { return row_count_; }
    bool is_bipartition() const { return row_count_ < size(); }

    /// Cluster sizes n_k; labels outside [0, k) are ignored.
    std::vector<std::int64_t> cluster_sizes() const;

    /// Number of clusters holding row elements (all clusters when not a bipartition).
    int row_clusters() const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<int> assignment_;
    int k_ = 0;
    int row_count_ = 0;
};

/// True iff labels lie in [0, k), no cluster is empty, and (for
/// co-clustering datasets) every cluster is confined to one side.
bool validate_partition(const Partition& p, const Dataset& ds);

/// Same checks without a dataset; the side boundary comes from the partition.
bool validate_partition(const Partition& p);

/// Renumbers clusters in order of first occurrence. Idempotent.
Partition relabel_canonical(const Partition& p);

/// Equality as set partitions.
bool same_set_partition(const Partition& a, const Partition& b);

/// Members of each cluster, in increasing element order.
std::vector<std::vector<int>> cluster_members(const Partition& p);

}  // namespace iclh
