#include "iclh/partition.hpp"

#include "iclh/dataset.hpp"

#include <algorithm>

namespace iclh {

Partition::Partition(std::vector<int> assignment, int k)
    : assignment_(std::move(assignment)), k_(k), row_count_(static_cast<int>(assignment_.size())) {}

Partition::Partition(std::vector<int> assignment, int k, int row_count)
    : assignment_(std::move(assignment)), k_(k), row_count_(row_count) {}

Partition Partition::from_labels(const std::vector<int>& labels) {
    return from_labels(labels, static_cast<int>(labels.size()));
}

Partition Partition::from_labels(const std::vector<int>& labels, int row_count) {
    Partition raw(labels, 0, row_count);
    int top = -1;
    for (int v : labels) top = std::max(top, v);
    raw.k_ = top + 1;
    return relabel_canonical(raw);
}

std::vector<std::int64_t> Partition::cluster_sizes() const {
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(std::max(k_, 0)), 0);
    for (int v : assignment_) {
        if (v >= 0 && v < k_) ++sizes[static_cast<std::size_t>(v)];
    }
    return sizes;
}

int Partition::row_clusters() const {
    std::vector<char> seen(static_cast<std::size_t>(std::max(k_, 0)), 0);
    int count = 0;
    for (int i = 0; i < row_count_ && i < size(); ++i) {
        const int v = assignment_[static_cast<std::size_t>(i)];
        if (v >= 0 && v < k_ && !seen[static_cast<std::size_t>(v)]) {
            seen[static_cast<std::size_t>(v)] = 1;
            ++count;
        }
    }
    return count;
}

bool validate_partition(const Partition& p) {
    if (p.k() < 1 || p.row_count() < 0 || p.row_count() > p.size()) return false;
    // side[k]: 0 unseen, 1 rows, 2 columns
    std::vector<char> side(static_cast<std::size_t>(p.k()), 0);
    for (int i = 0; i < p.size(); ++i) {
        const int v = p[static_cast<std::size_t>(i)];
        if (v < 0 || v >= p.k()) return false;
        const char s = i < p.row_count() ? 1 : 2;
        char& seen = side[static_cast<std::size_t>(v)];
        if (seen != 0 && seen != s) return false;
        seen = s;
    }
    for (char s : side) {
        if (s == 0) return false;
    }
    return true;
}

bool validate_partition(const Partition& p, const Dataset& ds) {
    if (p.size() != ds.element_count()) return false;
    const int expected_rows = ds.is_bipartite() ? ds.n() : ds.element_count();
    if (p.row_count() != expected_rows) return false;
    return validate_partition(p);
}

Partition relabel_canonical(const Partition& p) {
    std::vector<int> mapping;
    std::vector<int> out(p.assignment().size());
    int next = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int v = p[i];
        if (v < 0) {
            out[i] = v;
            continue;
        }
        if (static_cast<std::size_t>(v) >= mapping.size()) mapping.resize(static_cast<std::size_t>(v) + 1, -1);
        int& m = mapping[static_cast<std::size_t>(v)];
        if (m < 0) m = next++;
        out[i] = m;
    }
    return Partition(std::move(out), next, p.row_count());
}

bool same_set_partition(const Partition& a, const Partition& b) {
    return a.size() == b.size() && relabel_canonical(a).assignment() == relabel_canonical(b).assignment();
}

std::vector<std::vector<int>> cluster_members(const Partition& p) {
    std::vector<std::vector<int>> members(static_cast<std::size_t>(std::max(p.k(), 0)));
    for (int i = 0; i < p.size(); ++i) {
        const int v = p[static_cast<std::size_t>(i)];
        if (v >= 0 && v < p.k()) members[static_cast<std::size_t>(v)].push_back(i);
    }
    return members;
}

}  // namespace iclh
