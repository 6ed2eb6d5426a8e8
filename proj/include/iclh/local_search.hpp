#pragma once

#include <utility>
#include <vector>

#include "iclh/icl.hpp"
#include "iclh/rng.hpp"

namespace iclh {

/// Symmetric set of cluster pairs allowed to exchange elements or merge.
/// Tracks cluster renumbering so it stays aligned with an IclState.
class PairMask {
public:
    PairMask() = default;
    /// k clusters, no pair allowed yet.
    explicit PairMask(int k);

    int k() const { return static_cast<int>(rows_.size()); }
    bool allowed(int a, int b) const { return rows_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0; }
    void allow(int a, int b);

    /// `keep` inherits every pair of `drop`; call before the state applies the merge.
    void merge(int keep, int drop);
    /// Mirrors IclState's renumbering after a cluster disappears.
    void apply(const ClusterRemoval& r);
    /// Appends a cluster split off `source`: it shares source's pairs and pairs with source.
    void add_split(int source);

private:
    std::vector<std::vector<char>> rows_;
};

enum class SweepOrder { Shuffled, Index };

struct MovePolicy {
    /// When set, only pairs in `allowed` may exchange elements or merge.
    bool restrict_to_common_parent = false;
    PairMask allowed;
    SweepOrder sweep_order = SweepOrder::Shuffled;
    /// 0 means unlimited.
    int max_sweeps = 0;
};

/// Moves with a gain at or below this are rejected; exact ties never move.
inline constexpr double move_epsilon = 1e-9;

/// Repeated sweeps moving each element to its best cluster when that raises
/// the ICL. Stops after a sweep without moves. Returns the number of moves.
int greedy_swap(IclState& state, MovePolicy& policy, Rng& rng);

/// Steepest-ascent merging while the best merge raises the ICL.
/// Returns the number of merges.
int greedy_merge(IclState& state, MovePolicy& policy);

/// Unordered child-cluster pairs (k < l) whose clusters lie inside one
/// cluster of p1 or inside one cluster of p2. Throws std::invalid_argument
/// unless child refines both parents.
std::vector<std::pair<int, int>> common_parent_pairs(const Partition& child, const Partition& p1,
                                                     const Partition& p2);

/// Same set as a mask indexed by the child's labels.
PairMask common_parent_mask(const Partition& child, const Partition& p1, const Partition& p2);

}  // namespace iclh
