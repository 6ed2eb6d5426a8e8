#pragma once

#include <vector>

#include "iclh/icl.hpp"

namespace iclh {

/// Log-linear small-alpha approximation (K - 1) log alpha + I(Z), with one
/// (K_s - 1) slope per side for bipartitions. Throws std::domain_error
/// unless alpha > 0.
double icl_lin(const IclState& state, double alpha);

/// Number of clusters minus one per non-empty side: the slope of icl_lin in log alpha.
int icl_lin_slope(const Clustering& c);

/// log alpha at which merging g and h starts to pay off: I(Z with g,h merged) - I(Z).
double tipping_alpha(const IclState& state, int g, int h);

struct Fusion {
    int g = -1;
    int h = -1;
    double log_alpha = 0.0;
};

/// Same-side pair with the largest tipping point. Ties go to the pair that
/// comes first under canonical labels. Throws std::logic_error when no pair exists.
Fusion best_fusion(const IclState& state);

/// Node of the merge forest. Leaves 0..K-1 are the initial clusters under
/// canonical labels; internal node K + s is created by step s.
struct TreeNode {
    int left = -1;
    int right = -1;
    int side = 0;
    /// Dendrogram height, max(-log alpha_f, 0); filled by prune_pareto.
    double height = 0.0;
    bool is_leaf() const { return left < 0; }
};

struct MergeStep {
    int left = -1;   ///< tree node merged (holds the smaller canonical label)
    int right = -1;  ///< tree node merged
    int node = -1;   ///< tree node created
    int side = 0;
    double log_alpha = 0.0;  ///< tipping point of this fusion
    double intercept = 0.0;  ///< I(Z) after the fusion
    int slope = 0;           ///< icl_lin slope after the fusion
};

/// A partition on the pruned front: the one reached after `level` steps,
/// dominant for log alpha in [next entry's log_alpha, log_alpha].
struct FrontEntry {
    int level = 0;
    int slope = 0;
    double intercept = 0.0;
    /// Crossing with the previous (finer) front entry; 0 for the first entry.
    double log_alpha = 0.0;
};

struct HierarchyPath {
    Partition initial;
    int leaves = 0;
    double initial_intercept = 0.0;
    int initial_slope = 0;
    std::vector<MergeStep> steps;
    std::vector<TreeNode> nodes;
    /// One root per side present (row tree first).
    std::vector<int> roots;
    std::vector<FrontEntry> front;

    int clusters_at_level(int level) const { return leaves - level; }
};

/// Greedy agglomeration from the state's partition down to one cluster per
/// side, recording every fusion. The front is left empty.
HierarchyPath agglomerate(const IclState& initial);

/// Keeps the partitions that dominate icl_lin on some interval of
/// log alpha <= 0, recomputes the crossings between consecutive survivors
/// and sets node heights.
void prune_pareto(HierarchyPath& path);

struct Line {
    int slope = 0;
    double intercept = 0.0;
};

/// Upper envelope over log alpha <= 0 of lines listed by strictly
/// decreasing slope. Fills the surviving indices and each one's crossing
/// with the previous survivor (0 for the first).
void upper_envelope(const std::vector<Line>& lines, std::vector<int>& survivors, std::vector<double>& crossings);

/// Dissimilarity I(Z) - I(Z with g,h merged) between same-side initial
/// clusters (row-major K x K, diagonal and cross-side entries 0).
std::vector<double> leaf_dissimilarity(const IclState& initial);

/// Tree-consistent leaf order minimising the sum of dissimilarities between
/// neighbours, one block per tree in root order.
std::vector<int> order_leaves(const HierarchyPath& path, const std::vector<double>& dissimilarity);

/// Sum of dissimilarities between neighbours of `order` inside each tree.
double order_cost(const HierarchyPath& path, const std::vector<int>& order, const std::vector<double>& dissimilarity);

struct CutSuggestion {
    int clusters = 0;
    int level = 0;
    bool low_confidence = false;
};

/// Cuts before the largest jump between consecutive front heights; ties go
/// to the earliest jump. Without at least two
/// fusions on the front it suggests the initial partition.
CutSuggestion cut_heuristic(const HierarchyPath& path);

/// Initial partition after the first `level` fusions, canonically labelled.
Partition partition_at_level(const HierarchyPath& path, int level);

}  // namespace iclh
