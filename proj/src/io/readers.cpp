#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "iclh/io.hpp"

namespace iclh {
namespace {

std::vector<std::string_view> split(std::string_view line, std::string_view separators) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const std::size_t j = line.find_first_of(separators, i);
        const std::size_t end = j == std::string_view::npos ? line.size() : j;
        if (end > i) out.push_back(line.substr(i, end - i));
        i = end + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
    s = trim(s);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::int64_t field(std::string_view s, std::size_t line, const char* what) {
    const auto v = parse_int(s);
    if (!v) fail(line, std::string("expected an integer ") + what + ", got '" + std::string(s) + "'");
    return *v;
}

int index_field(std::string_view s, std::size_t line, const char* what) {
    const std::int64_t v = field(s, line, what);
    if (v < 0) fail(line, std::string("negative ") + what);
    if (v > std::numeric_limits<int>::max() - 1) fail(line, std::string(what) + " too large");
    return static_cast<int>(v);
}

bool is_graph(DatasetKind k) { return k == DatasetKind::DirectedGraph || k == DatasetKind::UndirectedGraph; }

Dataset build(DatasetKind kind, int rows, int cols, std::vector<Entry> entries, const DatasetSource& source) {
    try {
        switch (kind) {
        case DatasetKind::CountMatrix:
            return Dataset::count_matrix(rows, cols, std::move(entries), source.sum_duplicates);
        case DatasetKind::BipartiteMatrix:
            return Dataset::bipartite_matrix(rows, cols, std::move(entries), source.sum_duplicates);
        case DatasetKind::DirectedGraph:
            return Dataset::directed_graph(rows, std::move(entries), source.self_loops, source.sum_duplicates);
        case DatasetKind::UndirectedGraph:
            return Dataset::undirected_graph(rows, std::move(entries), source.self_loops, source.sum_duplicates);
        }
    } catch (const ParseError&) {
        throw;
    } catch (const DataError& e) {
        throw ParseError(e.what());
    }
    throw ParseError("unknown dataset kind");
}

/// Declared size, or the inferred one when none is declared.
int resolve_dim(const std::optional<int>& declared, int inferred, const char* what) {
    if (!declared) return inferred;
    if (*declared < inferred) {
        throw ParseError(std::string("declared ") + what + " count " + std::to_string(*declared) +
                         " is smaller than the data needs (" + std::to_string(inferred) + ")");
    }
    return *declared;
}

Dataset read_edges(std::istream& in, const DatasetSource& source) {
    std::vector<Entry> entries;
    int max_row = -1, max_col = -1;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto parts = split(view, "\t ");
        if (parts.size() < 2 || parts.size() > 3) fail(number, "expected 'src<TAB>dst[<TAB>weight]'");
        Entry e;
        e.row = index_field(parts[0], number, "source id");
        e.col = index_field(parts[1], number, "target id");
        e.value = parts.size() == 3 ? field(parts[2], number, "weight") : 1;
        if (e.value < 0) fail(number, "negative weight");
        max_row = std::max(max_row, e.row);
        max_col = std::max(max_col, e.col);
        entries.push_back(e);
    }
    if (is_graph(source.kind)) {
        const int n = resolve_dim(source.rows, std::max(max_row, max_col) + 1, "node");
        return build(source.kind, n, n, std::move(entries), source);
    }
    const int rows = resolve_dim(source.rows, max_row + 1, "row");
    const int cols = resolve_dim(source.cols, max_col + 1, "column");
    return build(source.kind, rows, cols, std::move(entries), source);
}

Dataset read_matrix_market(std::istream& in, const DatasetSource& source) {
    std::string line;
    std::size_t number = 1;
    if (!std::getline(in, line)) throw ParseError("empty Matrix Market file");
    std::string lower = line;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    const auto header = split(trim(lower), " \t");
    if (header.size() != 5 || header[0] != "%%matrixmarket" || header[1] != "matrix" || header[2] != "coordinate") {
        fail(number, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
    }
    const bool pattern = header[3] == "pattern";
    if (!pattern && header[3] != "integer") fail(number, "only integer and pattern fields are supported");
    const bool symmetric = header[4] == "symmetric";
    if (!symmetric && header[4] != "general") fail(number, "only general and symmetric matrices are supported");

    std::int64_t rows = -1, cols = -1, nnz = -1;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '%') continue;
        const auto parts = split(view, " \t");
        if (parts.size() != 3) fail(number, "expected 'rows cols entries'");
        rows = field(parts[0], number, "row count");
        cols = field(parts[1], number, "column count");
        nnz = field(parts[2], number, "entry count");
        if (rows < 0 || cols < 0 || nnz < 0) fail(number, "negative size");
        break;
    }
    if (rows < 0) throw ParseError("missing Matrix Market size line");
    if (symmetric && rows != cols) fail(number, "a symmetric matrix must be square");

    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(nnz));
    while (std::getline(in, line)) {
        ++number;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '%') continue;
        const auto parts = split(view, " \t");
        if (parts.size() != (pattern ? 2u : 3u)) fail(number, pattern ? "expected 'i j'" : "expected 'i j value'");
        const std::int64_t i = field(parts[0], number, "row index");
        const std::int64_t j = field(parts[1], number, "column index");
        if (i < 1 || i > rows || j < 1 || j > cols) fail(number, "coordinate outside the declared size");
        const std::int64_t v = pattern ? 1 : field(parts[2], number, "value");
        if (v < 0) fail(number, "negative value");
        entries.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
    }
    if (static_cast<std::int64_t>(entries.size()) != nnz) {
        throw ParseError("header declares " + std::to_string(nnz) + " entries, found " + std::to_string(entries.size()));
    }

    DatasetKind kind = source.kind;
    if (is_graph(kind)) {
        if (rows != cols) throw ParseError("a graph needs a square matrix");
        if (symmetric) kind = DatasetKind::UndirectedGraph;
        if (source.rows && *source.rows != rows) throw ParseError("declared node count differs from the file header");
        return build(kind, static_cast<int>(rows), static_cast<int>(cols), std::move(entries), source);
    }
    if (symmetric) {
        const std::size_t stored = entries.size();
        for (std::size_t e = 0; e < stored; ++e) {
            if (entries[e].row != entries[e].col) entries.push_back({entries[e].col, entries[e].row, entries[e].value});
        }
    }
    return build(kind, static_cast<int>(rows), static_cast<int>(cols), std::move(entries), source);
}

Dataset read_csv(std::istream& in, const DatasetSource& source) {
    if (is_graph(source.kind)) {
        throw ModelMismatch("csv-counts holds a count matrix; graphs are read from edges-tsv or mm-coord");
    }
    std::vector<Entry> entries;
    std::string line;
    std::size_t number = 0;
    int rows = 0;
    int cols = -1;
    bool first = true;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        std::vector<std::string_view> parts;
        std::size_t i = 0;
        for (;;) {
            const std::size_t j = view.find(',', i);
            parts.push_back(view.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
            if (j == std::string_view::npos) break;
            i = j + 1;
        }
        if (first) {
            first = false;
            const bool header = std::any_of(parts.begin(), parts.end(), [](std::string_view p) {
                return !parse_int(p).has_value();
            });
            if (header) continue;
        }
        if (cols < 0) cols = static_cast<int>(parts.size());
        if (static_cast<int>(parts.size()) != cols) {
            fail(number, "expected " + std::to_string(cols) + " columns, got " + std::to_string(parts.size()));
        }
        for (int c = 0; c < cols; ++c) {
            const std::int64_t v = field(parts[static_cast<std::size_t>(c)], number, "count");
            if (v < 0) fail(number, "negative count");
            if (v > 0) entries.push_back({rows, c, v});
        }
        ++rows;
    }
    if (cols < 0) cols = 0;
    if (source.rows && *source.rows != rows) throw ParseError("declared row count differs from the file");
    if (source.cols && *source.cols != cols) throw ParseError("declared column count differs from the file");
    return build(source.kind, rows, cols, std::move(entries), source);
}

}  // namespace

std::string to_string(InputFormat f) {
    switch (f) {
    case InputFormat::EdgesTsv: return "edges-tsv";
    case InputFormat::MmCoord: return "mm-coord";
    case InputFormat::CsvCounts: return "csv-counts";
    }
    return "unknown";
}

InputFormat input_format_from_string(const std::string& name) {
    if (name == "edges-tsv") return InputFormat::EdgesTsv;
    if (name == "mm-coord") return InputFormat::MmCoord;
    if (name == "csv-counts") return InputFormat::CsvCounts;
    throw std::invalid_argument("unknown format '" + name + "'");
}

DatasetKind dataset_kind_for(ModelKind model, bool undirected) {
    switch (model) {
    case ModelKind::Mom: return DatasetKind::CountMatrix;
    case ModelKind::Sbm:
    case ModelKind::DcSbm: return undirected ? DatasetKind::UndirectedGraph : DatasetKind::DirectedGraph;
    case ModelKind::LbmBernoulli:
    case ModelKind::DcLbm: return DatasetKind::BipartiteMatrix;
    }
    return DatasetKind::CountMatrix;
}

Dataset read_dataset(std::istream& in, const DatasetSource& source) {
    switch (source.format) {
    case InputFormat::EdgesTsv: return read_edges(in, source);
    case InputFormat::MmCoord: return read_matrix_market(in, source);
    case InputFormat::CsvCounts: return read_csv(in, source);
    }
    throw ParseError("unknown format");
}

Dataset read_dataset(const DatasetSource& source) {
    std::ifstream in(source.path);
    if (!in) throw ParseError("cannot open '" + source.path + "'");
    try {
        return read_dataset(in, source);
    } catch (const ParseError& e) {
        throw ParseError(source.path + ": " + e.what());
    }
}

void write_dataset(std::ostream& out, const Dataset& ds, InputFormat format) {
    switch (format) {
    case InputFormat::EdgesTsv:
        for (const Entry& e : ds.entries()) out << e.row << '\t' << e.col << '\t' << e.value << '\n';
        return;
    case InputFormat::MmCoord: {
        const bool symmetric = ds.kind() == DatasetKind::UndirectedGraph;
        out << "%%MatrixMarket matrix coordinate integer " << (symmetric ? "symmetric" : "general") << '\n';
        out << "% " << to_string(ds.kind()) << '\n';
        out << ds.n() << ' ' << ds.d() << ' ' << ds.entries().size() << '\n';
        for (const Entry& e : ds.entries()) {
            // Symmetric files keep the lower triangle.
            if (symmetric) {
                out << e.col + 1 << ' ' << e.row + 1 << ' ' << e.value << '\n';
            } else {
                out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value << '\n';
            }
        }
        return;
    }
    case InputFormat::CsvCounts: {
        if (ds.is_graph()) throw ModelMismatch("csv-counts cannot hold a graph");
        std::vector<std::int64_t> row(static_cast<std::size_t>(ds.d()));
        const auto& rows = ds.out();
        for (int i = 0; i < ds.n(); ++i) {
            std::fill(row.begin(), row.end(), 0);
            for (auto a = rows.begin(i); a < rows.end(i); ++a) {
                row[static_cast<std::size_t>(rows.index[static_cast<std::size_t>(a)])] =
                    rows.value[static_cast<std::size_t>(a)];
            }
            for (int j = 0; j < ds.d(); ++j) out << (j ? "," : "") << row[static_cast<std::size_t>(j)];
            out << '\n';
        }
        return;
    }
    }
}

std::vector<int> read_labels(std::istream& in) {
    std::vector<int> labels;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        labels.push_back(index_field(view, number, "label"));
    }
    return labels;
}

void write_labels(std::ostream& out, const std::vector<int>& labels) {
    for (const int l : labels) out << l << '\n';
}

}  // namespace iclh
