// Optimal leaf ordering by dynamic programming over the merge tree.
//
// best[l][r] is the cheapest order of the subtree rooted at lca(l, r) that
// starts with leaf l and ends with leaf r. Every leaf pair has exactly one
// lowest common ancestor, so one K x K table holds all subtrees. Splitting
// the inner minimisation through an intermediate table keeps the total cost
// at O(K^3).

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "iclh/hierarchy.hpp"

namespace iclh {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct LeafOrderer {
    const HierarchyPath& path;
    const std::vector<double>& d;
    std::size_t k;
    std::vector<std::vector<int>> leaves;  // per node, left to right
    std::vector<double> best;

    LeafOrderer(const HierarchyPath& p, const std::vector<double>& dis)
        : path(p), d(dis), k(static_cast<std::size_t>(p.leaves)), leaves(p.nodes.size()), best(k * k, inf) {
        if (d.size() != k * k) throw std::invalid_argument("dissimilarity must be K x K");
        for (std::size_t l = 0; l < k; ++l) {
            leaves[l] = {static_cast<int>(l)};
            best[l * k + l] = 0.0;
        }
        for (const auto& s : path.steps) {
            auto& mine = leaves[static_cast<std::size_t>(s.node)];
            mine = leaves[static_cast<std::size_t>(s.left)];
            const auto& right = leaves[static_cast<std::size_t>(s.right)];
            mine.insert(mine.end(), right.begin(), right.end());
            combine(s.left, s.right);
        }
    }

    double dist(int a, int b) const { return d[static_cast<std::size_t>(a) * k + static_cast<std::size_t>(b)]; }
    double& at(int a, int b) { return best[static_cast<std::size_t>(a) * k + static_cast<std::size_t>(b)]; }
    double at(int a, int b) const { return best[static_cast<std::size_t>(a) * k + static_cast<std::size_t>(b)]; }

    /// Leaves of `node` that can end an order of `node` starting at leaf l.
    const std::vector<int>& ends(int node, int l) const {
        const TreeNode& n = path.nodes[static_cast<std::size_t>(node)];
        if (n.is_leaf()) return leaves[static_cast<std::size_t>(node)];
        const auto& left = leaves[static_cast<std::size_t>(n.left)];
        const bool in_left = std::find(left.begin(), left.end(), l) != left.end();
        return leaves[static_cast<std::size_t>(in_left ? n.right : n.left)];
    }

    void combine(int a, int b) {
        const auto& la = leaves[static_cast<std::size_t>(a)];
        const auto& lb = leaves[static_cast<std::size_t>(b)];
        // via[l][m]: best order of a starting at l, then the step to m in b.
        std::vector<double> via(la.size() * lb.size(), inf);
        for (std::size_t i = 0; i < la.size(); ++i) {
            for (const int kk : ends(a, la[i])) {
                const double head = at(la[i], kk);
                for (std::size_t j = 0; j < lb.size(); ++j) {
                    via[i * lb.size() + j] = std::min(via[i * lb.size() + j], head + dist(kk, lb[j]));
                }
            }
        }
        std::vector<std::size_t> pos(k, 0);
        for (std::size_t j = 0; j < lb.size(); ++j) pos[static_cast<std::size_t>(lb[j])] = j;
        for (std::size_t j = 0; j < lb.size(); ++j) {
            const int r = lb[j];
            const auto& starts = ends(b, r);
            for (std::size_t i = 0; i < la.size(); ++i) {
                double v = inf;
                for (const int m : starts) {
                    v = std::min(v, via[i * lb.size() + pos[static_cast<std::size_t>(m)]] + at(m, r));
                }
                at(la[i], r) = v;
                at(r, la[i]) = v;
            }
        }
    }

    void unfold(int node, int l, int r, std::vector<int>& out) const {
        const TreeNode& n = path.nodes[static_cast<std::size_t>(node)];
        if (n.is_leaf()) {
            out.push_back(node);
            return;
        }
        const auto& left = leaves[static_cast<std::size_t>(n.left)];
        const bool l_left = std::find(left.begin(), left.end(), l) != left.end();
        const int a = l_left ? n.left : n.right;
        const int b = l_left ? n.right : n.left;
        int bk = -1, bm = -1;
        double bv = inf;
        for (const int kk : ends(a, l)) {
            for (const int m : ends(b, r)) {
                const double v = at(l, kk) + dist(kk, m) + at(m, r);
                if (bk < 0 || v < bv) {
                    bk = kk;
                    bm = m;
                    bv = v;
                }
            }
        }
        unfold(a, l, bk, out);
        unfold(b, bm, r, out);
    }

    void order_tree(int root, std::vector<int>& out) const {
        const TreeNode& n = path.nodes[static_cast<std::size_t>(root)];
        if (n.is_leaf()) {
            out.push_back(root);
            return;
        }
        int bl = -1, br = -1;
        double bv = inf;
        for (const int l : leaves[static_cast<std::size_t>(n.left)]) {
            for (const int r : leaves[static_cast<std::size_t>(n.right)]) {
                if (bl < 0 || at(l, r) < bv) {
                    bl = l;
                    br = r;
                    bv = at(l, r);
                }
            }
        }
        unfold(root, bl, br, out);
    }
};

}  // namespace

std::vector<int> order_leaves(const HierarchyPath& path, const std::vector<double>& dissimilarity) {
    LeafOrderer dp(path, dissimilarity);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(path.leaves));
    for (const int root : path.roots) dp.order_tree(root, out);
    return out;
}

double order_cost(const HierarchyPath& path, const std::vector<int>& order, const std::vector<double>& dissimilarity) {
    const auto k = static_cast<std::size_t>(path.leaves);
    double cost = 0.0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const int a = order[i];
        const int b = order[i + 1];
        if (path.nodes[static_cast<std::size_t>(a)].side != path.nodes[static_cast<std::size_t>(b)].side) continue;
        cost += dissimilarity[static_cast<std::size_t>(a) * k + static_cast<std::size_t>(b)];
    }
    return cost;
}

}  // namespace iclh
