#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "iclh/config.hpp"
#include "iclh/dataset.hpp"
#include "iclh/hierarchy.hpp"
#include "iclh/icl.hpp"
#include "iclh/partition.hpp"

namespace iclh {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr const char* schema_version = "1.0";

/// Unreadable or malformed input file.
class ParseError : public DataError {
public:
    using DataError::DataError;
};

/// Result file with a schema this build cannot read.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class InputFormat { EdgesTsv, MmCoord, CsvCounts };

std::string to_string(InputFormat f);
InputFormat input_format_from_string(const std::string& name);

/// Everything needed to read a dataset again.
struct DatasetSource {
    std::string path;
    InputFormat format = InputFormat::EdgesTsv;
    DatasetKind kind = DatasetKind::DirectedGraph;
    /// Declared row / node count; inferred from the data when unset.
    std::optional<int> rows;
    /// Declared column count for matrices.
    std::optional<int> cols;
    bool sum_duplicates = false;
    bool self_loops = true;
};

/// Dataset kind a model reads, given whether the graph is undirected.
DatasetKind dataset_kind_for(ModelKind model, bool undirected);

/// Parses the dataset described by `source`. Matrix Market files with a
/// symmetric header become undirected graphs when a graph is requested.
/// Throws ParseError for malformed content and ModelMismatch when the
/// format cannot hold the requested kind.
Dataset read_dataset(std::istream& in, const DatasetSource& source);
Dataset read_dataset(const DatasetSource& source);

/// Writes `ds` in `format`; edges-tsv and mm-coord use 0-based / 1-based
/// coordinates respectively, csv-counts writes the dense matrix.
void write_dataset(std::ostream& out, const Dataset& ds, InputFormat format);

/// One label per line.
std::vector<int> read_labels(std::istream& in);
void write_labels(std::ostream& out, const std::vector<int>& labels);

struct FitRecord {
    ModelKind model = ModelKind::Sbm;
    double alpha = 1.0;
    ResolvedHyper hyper;
    RunConfig config;
    DatasetSource source;
    int n = 0;
    int d = 0;
    Partition partition;
    IclValue icl;
    std::vector<double> history;
    int generations = 0;
    double wall_clock_seconds = 0.0;
};

nlohmann::json to_json(const FitRecord& fit);
/// Throws SchemaError for an unknown major version or a malformed record.
FitRecord fit_from_json(const nlohmann::json& j);

struct HierarchyRecord {
    std::string fit_path;
    ModelKind model = ModelKind::Sbm;
    HierarchyPath path;
    std::vector<int> leaf_order;
    CutSuggestion cut;
};

nlohmann::json to_json(const HierarchyRecord& h);
HierarchyRecord hierarchy_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

/// Merge forest as a DOT digraph; every node carries its height.
void write_dot(std::ostream& out, const HierarchyPath& path);
/// One Newick tree per root; branch lengths are height differences.
void write_newick(std::ostream& out, const HierarchyPath& path);

}  // namespace iclh
