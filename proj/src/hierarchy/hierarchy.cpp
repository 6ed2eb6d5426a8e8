#include "iclh/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "iclh/local_search.hpp"
#include "search/merge_cache.hpp"

namespace iclh {
namespace {

/// Canonical rank of each current cluster: order of its smallest element.
std::vector<int> canonical_rank(const Clustering& c) {
    std::vector<int> rank(static_cast<std::size_t>(c.k()), -1);
    int next = 0;
    for (const int l : c.label) {
        auto& r = rank[static_cast<std::size_t>(l)];
        if (r < 0) r = next++;
    }
    return rank;
}

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

int find_root(std::vector<int>& parent, int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
    }
    return x;
}

}  // namespace

int icl_lin_slope(const Clustering& c) {
    int slope = 0;
    for (int s = 0; s < 2; ++s) {
        if (c.side_k[s] > 0) slope += c.side_k[s] - 1;
    }
    return slope;
}

double icl_lin(const IclState& state, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
    return static_cast<double>(icl_lin_slope(state.clustering())) * std::log(alpha) + state.intercept();
}

double tipping_alpha(const IclState& state, int g, int h) { return state.intercept_merge_delta(g, h); }

Fusion best_fusion(const IclState& state) {
    const Clustering& c = state.clustering();
    const auto rank = canonical_rank(c);
    Fusion best;
    std::pair<int, int> best_key{0, 0};
    for (int g = 0; g < c.k(); ++g) {
        for (int h = g + 1; h < c.k(); ++h) {
            if (c.side[static_cast<std::size_t>(g)] != c.side[static_cast<std::size_t>(h)]) continue;
            const double v = state.intercept_merge_delta(g, h);
            const auto key = ordered(rank[static_cast<std::size_t>(g)], rank[static_cast<std::size_t>(h)]);
            if (best.g < 0 || v > best.log_alpha || (v == best.log_alpha && key < best_key)) {
                best = {g, h, v};
                best_key = key;
            }
        }
    }
    if (best.g < 0) throw std::logic_error("no fusion available");
    return best;
}

HierarchyPath agglomerate(const IclState& initial) {
    HierarchyPath path;
    path.initial = initial.partition();
    IclState state(initial.context_ptr(), path.initial);
    const int leaves = state.k();
    path.leaves = leaves;
    path.initial_intercept = state.intercept();
    path.initial_slope = icl_lin_slope(state.clustering());

    std::vector<int> node_of(static_cast<std::size_t>(leaves));
    std::iota(node_of.begin(), node_of.end(), 0);
    std::vector<int> first = node_of;  // canonical rank of the cluster
    for (int k = 0; k < leaves; ++k) {
        TreeNode leaf;
        leaf.side = state.clustering().side[static_cast<std::size_t>(k)];
        path.nodes.push_back(leaf);
    }

    MovePolicy policy;
    MergeCache cache(state, policy);
    for (;;) {
        const Clustering& c = state.clustering();
        int bg = -1, bh = -1;
        double best = 0.0;
        std::pair<int, int> best_key{0, 0};
        for (int a = 0; a < c.k(); ++a) {
            const int side = c.side[static_cast<std::size_t>(a)];
            const double ks = c.side_k[side];
            const double na = static_cast<double>(c.size[static_cast<std::size_t>(a)]);
            const double head = std::log(ks) - std::log(ks - 1.0) - log_gamma(na);
            for (int b = a + 1; b < c.k(); ++b) {
                if (!cache.valid(a, b)) continue;
                const double nb = static_cast<double>(c.size[static_cast<std::size_t>(b)]);
                const double v = cache.data(a, b) + head + log_gamma(na + nb) - log_gamma(nb);
                const auto key = ordered(first[static_cast<std::size_t>(a)], first[static_cast<std::size_t>(b)]);
                if (bg < 0 || v > best || (v == best && key < best_key)) {
                    bg = a;
                    bh = b;
                    best = v;
                    best_key = key;
                }
            }
        }
        if (bg < 0) break;
        const double exact = state.merge_data_delta(bg, bh);
        if (std::abs(exact - cache.data(bg, bh)) > 1e-7) {
            cache.set(bg, bh, exact);
            continue;
        }

        MergeStep step;
        step.log_alpha = state.intercept_merge_delta(bg, bh);
        step.side = c.side[static_cast<std::size_t>(bg)];
        const bool g_first = first[static_cast<std::size_t>(bg)] < first[static_cast<std::size_t>(bh)];
        step.left = node_of[static_cast<std::size_t>(g_first ? bg : bh)];
        step.right = node_of[static_cast<std::size_t>(g_first ? bh : bg)];
        step.node = static_cast<int>(path.nodes.size());
        const int merged_first = std::min(first[static_cast<std::size_t>(bg)], first[static_cast<std::size_t>(bh)]);

        cache.before_merge(state, bg, bh);
        const MergeOutcome outcome = state.apply_merge(bg, bh);
        cache.after_merge(state, outcome, policy);

        node_of[static_cast<std::size_t>(outcome.merged)] = step.node;
        first[static_cast<std::size_t>(outcome.merged)] = merged_first;
        if (outcome.removal.happened()) {
            node_of[static_cast<std::size_t>(outcome.removal.removed)] =
                node_of[static_cast<std::size_t>(outcome.removal.moved_from)];
            first[static_cast<std::size_t>(outcome.removal.removed)] =
                first[static_cast<std::size_t>(outcome.removal.moved_from)];
            node_of.pop_back();
            first.pop_back();
        }

        step.intercept = state.intercept();
        step.slope = icl_lin_slope(state.clustering());
        TreeNode internal;
        internal.left = step.left;
        internal.right = step.right;
        internal.side = step.side;
        path.nodes.push_back(internal);
        path.steps.push_back(step);
    }

    // Roots, row side first.
    const Clustering& c = state.clustering();
    std::vector<std::pair<int, int>> roots;
    for (int k = 0; k < c.k(); ++k) roots.emplace_back(c.side[static_cast<std::size_t>(k)], node_of[static_cast<std::size_t>(k)]);
    std::sort(roots.begin(), roots.end());
    for (const auto& r : roots) path.roots.push_back(r.second);
    return path;
}

void upper_envelope(const std::vector<Line>& lines, std::vector<int>& survivors, std::vector<double>& crossings) {
    survivors.clear();
    crossings.clear();
    for (int j = 0; j < static_cast<int>(lines.size()); ++j) {
        const Line& lj = lines[static_cast<std::size_t>(j)];
        double x = 0.0;
        while (!survivors.empty()) {
            const Line& last = lines[static_cast<std::size_t>(survivors.back())];
            if (last.slope <= lj.slope) throw std::invalid_argument("line slopes must decrease strictly");
            x = (lj.intercept - last.intercept) / static_cast<double>(last.slope - lj.slope);
            if (x < crossings.back()) break;
            survivors.pop_back();
            crossings.pop_back();
        }
        if (survivors.empty()) x = 0.0;
        survivors.push_back(j);
        crossings.push_back(x);
    }
}

void prune_pareto(HierarchyPath& path) {
    std::vector<Line> lines;
    lines.push_back({path.initial_slope, path.initial_intercept});
    for (const auto& s : path.steps) lines.push_back({s.slope, s.intercept});
    std::vector<int> survivors;
    std::vector<double> crossings;
    upper_envelope(lines, survivors, crossings);

    path.front.clear();
    for (std::size_t f = 0; f < survivors.size(); ++f) {
        const int level = survivors[f];
        path.front.push_back({level, lines[static_cast<std::size_t>(level)].slope,
                              lines[static_cast<std::size_t>(level)].intercept, crossings[f]});
    }
    // A fusion happens at the crossing of the first survivor that contains it.
    std::size_t f = 0;
    for (std::size_t s = 0; s < path.steps.size(); ++s) {
        const int level = static_cast<int>(s) + 1;
        while (path.front[f].level < level) ++f;
        path.nodes[static_cast<std::size_t>(path.steps[s].node)].height = std::max(-path.front[f].log_alpha, 0.0);
    }
}

std::vector<double> leaf_dissimilarity(const IclState& initial) {
    IclState state(initial.context_ptr(), initial.partition());
    const int k = state.k();
    std::vector<double> d(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0.0);
    const auto& side = state.clustering().side;
    for (int g = 0; g < k; ++g) {
        for (int h = g + 1; h < k; ++h) {
            if (side[static_cast<std::size_t>(g)] != side[static_cast<std::size_t>(h)]) continue;
            const double v = -state.intercept_merge_delta(g, h);
            d[static_cast<std::size_t>(g) * static_cast<std::size_t>(k) + static_cast<std::size_t>(h)] = v;
            d[static_cast<std::size_t>(h) * static_cast<std::size_t>(k) + static_cast<std::size_t>(g)] = v;
        }
    }
    return d;
}

CutSuggestion cut_heuristic(const HierarchyPath& path) {
    CutSuggestion out;
    out.clusters = path.leaves;
    // Heights of the fusions on the front, finest first.
    std::vector<double> height;
    for (std::size_t f = 1; f < path.front.size(); ++f) height.push_back(-path.front[f].log_alpha);
    if (height.size() < 2) {
        out.low_confidence = true;
        return out;
    }
    std::size_t at = 0;
    double largest = -1.0, second = -1.0;
    bool tied = false;
    for (std::size_t i = 0; i + 1 < height.size(); ++i) {
        const double gap = height[i + 1] - height[i];
        if (gap > largest) {
            second = largest;
            largest = gap;
            at = i;
            tied = false;
        } else if (gap == largest) {
            tied = true;
            second = gap;
        } else if (gap > second) {
            second = gap;
        }
    }
    // Cut after the fusion at height[at]: front entry at + 1.
    out.level = path.front[at + 1].level;
    out.clusters = path.clusters_at_level(out.level);
    out.low_confidence = tied || (second >= 0.0 && largest < 2.0 * second);
    return out;
}

Partition partition_at_level(const HierarchyPath& path, int level) {
    if (level < 0 || level > static_cast<int>(path.steps.size())) throw std::out_of_range("level out of range");
    const int leaves = path.leaves;
    std::vector<int> parent(static_cast<std::size_t>(leaves));
    std::iota(parent.begin(), parent.end(), 0);
    // Representative leaf of every tree node.
    std::vector<int> rep(path.nodes.size(), -1);
    for (int k = 0; k < leaves; ++k) rep[static_cast<std::size_t>(k)] = k;
    for (const auto& s : path.steps) rep[static_cast<std::size_t>(s.node)] = rep[static_cast<std::size_t>(s.left)];
    for (int s = 0; s < level; ++s) {
        const auto& step = path.steps[static_cast<std::size_t>(s)];
        const int a = find_root(parent, rep[static_cast<std::size_t>(step.left)]);
        const int b = find_root(parent, rep[static_cast<std::size_t>(step.right)]);
        parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    std::vector<int> labels(path.initial.assignment().size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = find_root(parent, path.initial[i]);
    return Partition::from_labels(labels, path.initial.row_count());
}

}  // namespace iclh
