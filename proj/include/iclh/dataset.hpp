#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace iclh {

/// Raised for malformed data: negative counts, out-of-range coordinates,
/// duplicates, or entries a model cannot accept.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DatasetKind { CountMatrix, DirectedGraph, UndirectedGraph, BipartiteMatrix };

std::string to_string(DatasetKind kind);
DatasetKind dataset_kind_from_string(const std::string& name);

struct Entry {
    int row = 0;
    int col = 0;
    std::int64_t value = 0;
};

/// Compressed sparse rows: neighbours of row r live in [offset[r], offset[r+1]).
struct SparseRows {
    std::vector<std::int64_t> offset;
    std::vector<int> index;
    std::vector<std::int64_t> value;

    std::int64_t begin(int r) const { return offset[static_cast<std::size_t>(r)]; }
    std::int64_t end(int r) const { return offset[static_cast<std::size_t>(r) + 1]; }
};

/// Sparse nonnegative integer data, immutable after construction.
///
/// Graphs are indexed by node on both axes. Undirected graphs keep each
/// unordered pair once in entries(), with row <= col, while out()/in()
/// expose the symmetric ordered-pair expansion used by the block models.
/// Zero-valued entries are dropped on construction.
class Dataset {
public:
    static Dataset count_matrix(int n, int d, std::vector<Entry> entries, bool sum_duplicates = false);
    static Dataset bipartite_matrix(int n, int d, std::vector<Entry> entries, bool sum_duplicates = false);
    static Dataset directed_graph(int n, std::vector<Entry> entries, bool self_loops_allowed = true,
                                  bool sum_duplicates = false);
    static Dataset undirected_graph(int n, std::vector<Entry> entries, bool self_loops_allowed = true,
                                    bool sum_duplicates = false);

    DatasetKind kind() const { return kind_; }
    int n() const { return n_; }
    int d() const { return d_; }
    bool is_graph() const {
        return kind_ == DatasetKind::DirectedGraph || kind_ == DatasetKind::UndirectedGraph;
    }
    bool is_bipartite() const { return kind_ == DatasetKind::BipartiteMatrix; }
    bool self_loops_allowed() const { return self_loops_allowed_; }

    /// Number of clusterable elements: n, or n + d for co-clustering.
    int element_count() const { return is_bipartite() ? n_ + d_ : n_; }

    std::span<const Entry> entries() const { return entries_; }
    const SparseRows& out() const { return out_; }
    const SparseRows& in() const { return in_; }

    /// Row totals c_i of the (expanded) matrix.
    std::span<const std::int64_t> row_totals() const { return row_totals_; }
    std::span<const std::int64_t> col_totals() const { return col_totals_; }
    std::int64_t total() const { return total_; }
    std::int64_t max_entry() const { return max_entry_; }
    bool is_binary() const { return max_entry_ <= 1; }

private:
    Dataset() = default;
    static Dataset build(DatasetKind kind, int n, int d, std::vector<Entry> entries, bool self_loops_allowed,
                         bool sum_duplicates);

    DatasetKind kind_ = DatasetKind::CountMatrix;
    int n_ = 0;
    int d_ = 0;
    bool self_loops_allowed_ = false;
    std::vector<Entry> entries_;
    SparseRows out_;
    SparseRows in_;
    std::vector<std::int64_t> row_totals_;
    std::vector<std::int64_t> col_totals_;
    std::int64_t total_ = 0;
    std::int64_t max_entry_ = 0;
};

}  // namespace iclh
