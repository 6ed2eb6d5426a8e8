#pragma once

#include <optional>
#include <vector>

#include "iclh/local_search.hpp"

namespace iclh {

struct MergeCandidate {
    int g = -1;
    int h = -1;
    double delta = 0.0;
};

/// Data-term merge deltas of every admissible pair, kept current across
/// merges. A merge of (g, h) changes another pair's delta only through the
/// blocks the pair shares with g and h, so those cross terms are swapped for
/// the merged cluster's instead of recomputing the pair.
class MergeCache {
public:
    MergeCache(const IclState& state, const MovePolicy& policy);

    /// Admissible pair with the largest total delta (prior part from current
    /// sizes); ties go to the smallest (g, h). nullopt if no pair exists.
    std::optional<MergeCandidate> best(const IclState& state) const;

    /// Replaces a cached value, e.g. after an exact re-evaluation.
    void set(int g, int h, double data_delta);
    double data(int g, int h) const { return data_[index(g, h)]; }
    /// Whether (g, h), g < h, is an admissible pair with a cached value.
    bool valid(int g, int h) const { return valid_[index(g, h)] != 0; }
    int k() const { return k_; }

    /// Call right before state.apply_merge(g, h) ...
    void before_merge(const IclState& state, int g, int h);
    /// ... and right after it, with its outcome and the updated policy mask.
    void after_merge(const IclState& state, const MergeOutcome& outcome, const MovePolicy& policy);

private:
    std::size_t index(int a, int b) const {
        return static_cast<std::size_t>(a) * stride_ + static_cast<std::size_t>(b);
    }
    bool admissible(const IclState& state, const MovePolicy& policy, int a, int b) const;

    std::size_t stride_;
    int k_;
    bool cross_terms_;
    std::vector<double> data_;
    std::vector<char> valid_;
};

}  // namespace iclh
