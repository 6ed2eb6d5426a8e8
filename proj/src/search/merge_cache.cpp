#include "search/merge_cache.hpp"

#include <algorithm>
#include <cmath>

namespace iclh {

MergeCache::MergeCache(const IclState& state, const MovePolicy& policy)
    : stride_(static_cast<std::size_t>(state.k())),
      k_(state.k()),
      cross_terms_(state.context().kind() != ModelKind::Mom),
      data_(stride_ * stride_, 0.0),
      valid_(stride_ * stride_, 0) {
    for (int a = 0; a < k_; ++a) {
        for (int b = a + 1; b < k_; ++b) {
            if (!admissible(state, policy, a, b)) continue;
            data_[index(a, b)] = state.merge_data_delta(a, b);
            valid_[index(a, b)] = 1;
        }
    }
}

bool MergeCache::admissible(const IclState& state, const MovePolicy& policy, int a, int b) const {
    const auto& side = state.clustering().side;
    if (side[static_cast<std::size_t>(a)] != side[static_cast<std::size_t>(b)]) return false;
    return !policy.restrict_to_common_parent || policy.allowed.allowed(a, b);
}

std::optional<MergeCandidate> MergeCache::best(const IclState& state) const {
    const Clustering& c = state.clustering();
    const auto& T = state.context().alpha_table();
    const double alpha = state.context().alpha();
    double shift[2] = {0.0, 0.0};
    for (int s = 0; s < 2; ++s) {
        const int k = c.side_k[s];
        if (k < 2) continue;
        const double kb = k;
        const double n = static_cast<double>(c.side_n[s]);
        shift[s] = log_gamma((kb - 1.0) * alpha) - log_gamma(kb * alpha) + log_gamma(alpha) -
                   log_gamma(n + (kb - 1.0) * alpha) + log_gamma(n + kb * alpha);
    }
    std::optional<MergeCandidate> out;
    for (int a = 0; a < k_; ++a) {
        const std::int64_t na = c.size[static_cast<std::size_t>(a)];
        const double base = shift[c.side[static_cast<std::size_t>(a)]] - T(na);
        for (int b = a + 1; b < k_; ++b) {
            if (!valid_[index(a, b)]) continue;
            const std::int64_t nb = c.size[static_cast<std::size_t>(b)];
            const double d = data_[index(a, b)] + base + T(na + nb) - T(nb);
            if (!out || d > out->delta) out = MergeCandidate{a, b, d};
        }
    }
    return out;
}

void MergeCache::set(int g, int h, double data_delta) {
    if (g > h) std::swap(g, h);
    data_[index(g, h)] = data_delta;
}

void MergeCache::before_merge(const IclState& state, int g, int h) {
    if (!cross_terms_) return;
    for (int a = 0; a < k_; ++a) {
        if (a == g || a == h) continue;
        for (int b = a + 1; b < k_; ++b) {
            if (b == g || b == h || !valid_[index(a, b)]) continue;
            data_[index(a, b)] -= state.merge_cross_term(a, b, g) + state.merge_cross_term(a, b, h);
        }
    }
}

void MergeCache::after_merge(const IclState& state, const MergeOutcome& outcome, const MovePolicy& policy) {
    const int keep = outcome.merged;
    if (outcome.removal.happened()) {
        const int r = outcome.removal.removed;
        const int last = outcome.removal.moved_from;
        if (r != last) {
            for (int l = 0; l < k_; ++l) {
                if (l == r || l == last) continue;
                const int lo = std::min(l, r), hi = std::max(l, r);
                const int slo = std::min(l, last), shi = std::max(l, last);
                data_[index(lo, hi)] = data_[index(slo, shi)];
                valid_[index(lo, hi)] = valid_[index(slo, shi)];
            }
        }
        for (int l = 0; l < k_; ++l) {
            valid_[index(std::min(l, last), std::max(l, last))] = 0;
        }
        --k_;
    }
    for (int a = 0; a < k_; ++a) {
        if (a == keep) continue;
        for (int b = a + 1; b < k_; ++b) {
            if (b == keep || !valid_[index(a, b)]) continue;
            if (cross_terms_) data_[index(a, b)] += state.merge_cross_term(a, b, keep);
        }
    }
    for (int l = 0; l < k_; ++l) {
        if (l == keep) continue;
        const std::size_t at = index(std::min(l, keep), std::max(l, keep));
        valid_[at] = admissible(state, policy, l, keep) ? 1 : 0;
        if (valid_[at]) data_[at] = state.merge_data_delta(l, keep);
    }
}

}  // namespace iclh
