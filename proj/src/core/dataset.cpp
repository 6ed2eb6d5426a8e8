#include "iclh/dataset.hpp"

#include <algorithm>
#include <tuple>

namespace iclh {

std::string to_string(DatasetKind kind) {
    switch (kind) {
    case DatasetKind::CountMatrix: return "count-matrix";
    case DatasetKind::DirectedGraph: return "directed-graph";
    case DatasetKind::UndirectedGraph: return "undirected-graph";
    case DatasetKind::BipartiteMatrix: return "bipartite-matrix";
    }
    return "unknown";
}

DatasetKind dataset_kind_from_string(const std::string& name) {
    if (name == "count-matrix") return DatasetKind::CountMatrix;
    if (name == "directed-graph") return DatasetKind::DirectedGraph;
    if (name == "undirected-graph") return DatasetKind::UndirectedGraph;
    if (name == "bipartite-matrix") return DatasetKind::BipartiteMatrix;
    throw DataError("unknown dataset kind '" + name + "'");
}

namespace {

SparseRows to_rows(int rows, const std::vector<Entry>& cells, bool transpose) {
    SparseRows out;
    out.offset.assign(static_cast<std::size_t>(rows) + 1, 0);
    for (const auto& e : cells) ++out.offset[static_cast<std::size_t>(transpose ? e.col : e.row) + 1];
    for (int r = 0; r < rows; ++r) out.offset[r + 1] += out.offset[r];
    out.index.resize(cells.size());
    out.value.resize(cells.size());
    std::vector<std::int64_t> cursor(out.offset.begin(), out.offset.end() - 1);
    for (const auto& e : cells) {
        const int r = transpose ? e.col : e.row;
        const auto at = static_cast<std::size_t>(cursor[static_cast<std::size_t>(r)]++);
        out.index[at] = transpose ? e.row : e.col;
        out.value[at] = e.value;
    }
    return out;
}

}  // namespace

Dataset Dataset::build(DatasetKind kind, int n, int d, std::vector<Entry> entries, bool self_loops_allowed,
                       bool sum_duplicates) {
    if (n <= 0 || d <= 0) throw DataError("dataset dimensions must be positive");
    const bool graph = kind == DatasetKind::DirectedGraph || kind == DatasetKind::UndirectedGraph;

    for (auto& e : entries) {
        if (e.value < 0) {
            throw DataError("negative count at (" + std::to_string(e.row) + ", " + std::to_string(e.col) + ")");
        }
        if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= d) {
            throw DataError("coordinate (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                            ") outside " + std::to_string(n) + "x" + std::to_string(d));
        }
        if (graph && e.row == e.col && !self_loops_allowed && e.value != 0) {
            throw DataError("self-loop on node " + std::to_string(e.row) + " but self-loops are disabled");
        }
        if (kind == DatasetKind::UndirectedGraph && e.row > e.col) std::swap(e.row, e.col);
    }
    std::erase_if(entries, [](const Entry& e) { return e.value == 0; });
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });

    std::vector<Entry> merged;
    merged.reserve(entries.size());
    for (const auto& e : entries) {
        if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
            if (!sum_duplicates) {
                throw DataError("duplicate coordinate (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                                ")");
            }
            merged.back().value += e.value;
        } else {
            merged.push_back(e);
        }
    }

    Dataset ds;
    ds.kind_ = kind;
    ds.n_ = n;
    ds.d_ = d;
    ds.self_loops_allowed_ = graph && self_loops_allowed;
    ds.entries_ = std::move(merged);

    std::vector<Entry> expanded = ds.entries_;
    if (kind == DatasetKind::UndirectedGraph) {
        for (const auto& e : ds.entries_) {
            if (e.row != e.col) expanded.push_back({e.col, e.row, e.value});
        }
    }
    ds.out_ = to_rows(n, expanded, false);
    ds.in_ = to_rows(d, expanded, true);

    ds.row_totals_.assign(static_cast<std::size_t>(n), 0);
    ds.col_totals_.assign(static_cast<std::size_t>(d), 0);
    for (const auto& e : expanded) {
        ds.row_totals_[static_cast<std::size_t>(e.row)] += e.value;
        ds.col_totals_[static_cast<std::size_t>(e.col)] += e.value;
        ds.total_ += e.value;
        ds.max_entry_ = std::max(ds.max_entry_, e.value);
    }
    return ds;
}

Dataset Dataset::count_matrix(int n, int d, std::vector<Entry> entries, bool sum_duplicates) {
    return build(DatasetKind::CountMatrix, n, d, std::move(entries), false, sum_duplicates);
}

Dataset Dataset::bipartite_matrix(int n, int d, std::vector<Entry> entries, bool sum_duplicates) {
    return build(DatasetKind::BipartiteMatrix, n, d, std::move(entries), false, sum_duplicates);
}

Dataset Dataset::directed_graph(int n, std::vector<Entry> entries, bool self_loops_allowed, bool sum_duplicates) {
    return build(DatasetKind::DirectedGraph, n, n, std::move(entries), self_loops_allowed, sum_duplicates);
}

Dataset Dataset::undirected_graph(int n, std::vector<Entry> entries, bool self_loops_allowed,
                                  bool sum_duplicates) {
    return build(DatasetKind::UndirectedGraph, n, n, std::move(entries), self_loops_allowed, sum_duplicates);
}

}  // namespace iclh
