// iclh: fit, hierarchy, generate and eval subcommands.
//
// Exit codes: 0 success, 1 usage or other errors, 2 malformed input,
// 3 model/format mismatch, 4 dataset/result dimension mismatch.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "iclh/genetic.hpp"
#include "iclh/hierarchy.hpp"
#include "iclh/io.hpp"
#include "iclh/synth.hpp"

using namespace iclh;
using nlohmann::json;

namespace {

class DimensionMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FitArgs {
    std::string model = "sbm";
    std::string input;
    std::string format = "edges-tsv";
    double alpha = 1.0;
    std::optional<double> beta;
    int pop_size = 50;
    double mutation = 0.25;
    int generations = 10;
    int init_k = 20;
    std::uint64_t seed = default_seed;
    int threads = 1;
    bool early_stop = false;
    std::string out;
    std::string labels;
    std::optional<int> nodes;
    std::optional<int> cols;
    bool undirected = false;
    bool sum_duplicates = false;
    bool no_self_loops = false;
};

struct HierarchyArgs {
    std::string from;
    std::string out;
    std::string dot;
    std::string newick;
    std::string cut_labels;
    std::string input;
};

struct GenerateArgs {
    std::string kind;
    std::string spec;
    std::uint64_t seed = default_seed;
    std::string out;
    std::string format;
    std::string labels;
    std::string super_labels;
};

struct EvalArgs {
    std::string a;
    std::string b;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

std::vector<int> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return read_labels(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

int run_fit(const FitArgs& a) {
    RunConfig config;
    config.model = model_kind_from_string(a.model);
    config.alpha = a.alpha;
    config.hyper.beta = a.beta;
    config.pop_size = a.pop_size;
    config.mutation_prob = a.mutation;
    config.max_generations = a.generations;
    config.initial_k = a.init_k;
    config.seed = a.seed;
    config.threads = a.threads;
    config.early_stop = a.early_stop;
    config.validate();

    DatasetSource source;
    source.path = a.input;
    source.format = input_format_from_string(a.format);
    source.kind = dataset_kind_for(config.model, a.undirected);
    source.rows = a.nodes;
    source.cols = a.cols;
    source.sum_duplicates = a.sum_duplicates;
    source.self_loops = !a.no_self_loops;

    const auto start = std::chrono::steady_clock::now();
    auto ds = std::make_shared<const Dataset>(read_dataset(source));
    const auto ctx = make_context(ds, config);
    const FitOutcome fit = hybrid_fit(ctx, config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    FitRecord rec;
    rec.model = config.model;
    rec.alpha = config.alpha;
    rec.hyper = ctx->hyper();
    rec.config = config;
    rec.source = source;
    // A symmetric Matrix Market file turns a graph request undirected.
    rec.source.kind = ds->kind();
    rec.n = ds->n();
    rec.d = ds->d();
    rec.partition = relabel_canonical(fit.best);
    rec.icl = fit.icl;
    rec.history = fit.history;
    rec.generations = fit.generations;
    rec.wall_clock_seconds = seconds;
    write_json_file(a.out, to_json(rec));
    if (!a.labels.empty()) {
        auto out = open_out(a.labels);
        write_labels(out, rec.partition.assignment());
    }

    std::printf("icl=%.6f k=%d", fit.icl.total, rec.partition.k());
    if (ds->is_bipartite()) {
        std::printf(" row_k=%d col_k=%d", rec.partition.row_clusters(), rec.partition.k() - rec.partition.row_clusters());
    }
    std::printf("\n");
    return 0;
}

/// Resolves a dataset path stored in a fit file: as given, else next to the fit file.
std::string locate(const std::string& stored, const std::string& fit_path) {
    namespace fs = std::filesystem;
    if (fs::exists(stored) || fs::path(stored).is_absolute()) return stored;
    const fs::path beside = fs::path(fit_path).parent_path() / stored;
    return fs::exists(beside) ? beside.string() : stored;
}

int run_hierarchy(const HierarchyArgs& a) {
    const FitRecord fit = fit_from_json(read_json_file(a.from));
    DatasetSource source = fit.source;
    source.path = a.input.empty() ? locate(fit.source.path, a.from) : a.input;
    auto ds = std::make_shared<const Dataset>(read_dataset(source));
    if (ds->n() != fit.n || ds->d() != fit.d) {
        throw DimensionMismatch("dataset is " + std::to_string(ds->n()) + " x " + std::to_string(ds->d()) +
                                " but the fit was made on " + std::to_string(fit.n) + " x " + std::to_string(fit.d));
    }
    if (!validate_partition(fit.partition, *ds)) throw DimensionMismatch("stored partition does not fit the dataset");

    const auto ctx = ModelContext::create(ds, fit.model, fit.hyper, fit.alpha, false, fit.config.cluster_cap);
    const IclState state(ctx, fit.partition);

    HierarchyRecord rec;
    rec.fit_path = a.from;
    rec.model = fit.model;
    rec.path = agglomerate(state);
    prune_pareto(rec.path);
    rec.leaf_order = order_leaves(rec.path, leaf_dissimilarity(state));
    rec.cut = cut_heuristic(rec.path);
    write_json_file(a.out, to_json(rec));
    if (!a.dot.empty()) {
        auto out = open_out(a.dot);
        write_dot(out, rec.path);
    }
    if (!a.newick.empty()) {
        auto out = open_out(a.newick);
        write_newick(out, rec.path);
    }
    if (!a.cut_labels.empty()) {
        auto out = open_out(a.cut_labels);
        write_labels(out, partition_at_level(rec.path, rec.cut.level).assignment());
    }
    std::printf("leaves=%d fusions=%zu front=%zu cut=%d%s\n", rec.path.leaves, rec.path.steps.size(),
                rec.path.front.size(), rec.cut.clusters, rec.cut.low_confidence ? " (low confidence)" : "");
    return 0;
}

json load_spec(const std::string& spec) {
    if (spec.empty()) return json::object();
    const auto first = spec.find_first_not_of(" \t\n");
    if (first != std::string::npos && spec[first] == '{') {
        try {
            return json::parse(spec);
        } catch (const json::exception& e) {
            throw ParseError(std::string("--spec: ") + e.what());
        }
    }
    return read_json_file(spec);
}

/// Copies known keys from `j` into the fields, rejecting anything else.
template <class Fields>
void apply_spec(const json& j, Fields&& fields) {
    if (!j.is_object()) throw ParseError("--spec must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (!fields(key, value)) throw ParseError("unknown spec key '" + key + "'");
        } catch (const json::exception& e) {
            throw ParseError("spec key '" + key + "': " + e.what());
        }
    }
}

int run_generate(const GenerateArgs& a) {
    const json spec = load_spec(a.spec);
    Rng rng(a.seed);
    const std::string labels_path = a.labels.empty() ? a.out + ".labels" : a.labels;
    if (a.kind == "hier-sbm") {
        HierSbmSpec s;
        apply_spec(spec, [&](const std::string& key, const json& v) {
            if (key == "n") s.n = v.get<int>();
            else if (key == "super_k") s.super_k = v.get<int>();
            else if (key == "sub_per_super") s.sub_per_super = v.get<int>();
            else if (key == "p_sub") s.p_sub = v.get<double>();
            else if (key == "p_super") s.p_super = v.get<double>();
            else if (key == "p_out") s.p_out = v.get<double>();
            else if (key == "directed") s.directed = v.get<bool>();
            else return false;
            return true;
        });
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("--spec: ") + e.what());
        }
        const HierSbmSample sample = gen_hier_sbm(s, rng);
        auto data = open_out(a.out);
        write_dataset(data, sample.data, input_format_from_string(a.format.empty() ? "edges-tsv" : a.format));
        auto labels = open_out(labels_path);
        write_labels(labels, sample.sub_labels);
        auto super = open_out(a.super_labels.empty() ? a.out + ".super.labels" : a.super_labels);
        write_labels(super, sample.super_labels);
        return 0;
    }
    if (a.kind == "mom") {
        MomSpec s;
        apply_spec(spec, [&](const std::string& key, const json& v) {
            if (key == "n") s.n = v.get<int>();
            else if (key == "k") s.k = v.get<int>();
            else if (key == "d") s.d = v.get<int>();
            else if (key == "boosted") s.boosted = v.get<int>();
            else if (key == "boost_factor") s.boost_factor = v.get<double>();
            else if (key == "draws") s.draws = v.get<int>();
            else return false;
            return true;
        });
        try {
            s.validate();
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("--spec: ") + e.what());
        }
        const MomSample sample = gen_mom(s, rng);
        auto data = open_out(a.out);
        write_dataset(data, sample.data, input_format_from_string(a.format.empty() ? "csv-counts" : a.format));
        auto labels = open_out(labels_path);
        write_labels(labels, sample.labels);
        return 0;
    }
    throw std::invalid_argument("unknown generator '" + a.kind + "' (expected hier-sbm or mom)");
}

int run_eval(const EvalArgs& a) {
    const std::vector<int> x = load_labels(a.a);
    const std::vector<int> y = load_labels(a.b);
    if (x.size() != y.size()) {
        throw DimensionMismatch("label files differ in length: " + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()));
    }
    if (x.empty()) throw ParseError("label files are empty");
    std::printf("%.6f\n", nmi(x, y));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical clustering with the integrated classification likelihood"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a partition with the hybrid genetic algorithm");
    fit_cmd->add_option("--model", fit.model, "mom | sbm | dcsbm | lbm-bern | dclbm")
        ->check(CLI::IsMember({"mom", "sbm", "dcsbm", "lbm-bern", "dclbm"}))
        ->capture_default_str();
    fit_cmd->add_option("--input", fit.input, "Dataset file")->required();
    fit_cmd->add_option("--format", fit.format, "edges-tsv | mm-coord | csv-counts")
        ->check(CLI::IsMember({"edges-tsv", "mm-coord", "csv-counts"}))
        ->capture_default_str();
    fit_cmd->add_option("--alpha", fit.alpha, "Dirichlet parameter of the cluster proportions")->capture_default_str();
    fit_cmd->add_option("--beta", fit.beta, "Observation prior (default depends on the model)");
    fit_cmd->add_option("--pop-size", fit.pop_size, "Population size")->capture_default_str();
    fit_cmd->add_option("--mutation", fit.mutation, "Split mutation probability")->capture_default_str();
    fit_cmd->add_option("--generations", fit.generations, "Maximum number of generations")->capture_default_str();
    fit_cmd->add_option("--init-k", fit.init_k, "Clusters in each random initial partition")->capture_default_str();
    fit_cmd->add_option("--seed", fit.seed, "Random seed")->capture_default_str();
    fit_cmd->add_option("--threads", fit.threads, "Worker threads for offspring")->capture_default_str();
    fit_cmd->add_flag("--early-stop", fit.early_stop, "Stop after three generations without improvement");
    fit_cmd->add_option("--out", fit.out, "Result JSON")->required();
    fit_cmd->add_option("--labels", fit.labels, "Also write the partition as a label file");
    fit_cmd->add_option("--nodes,--rows", fit.nodes, "Declared node (or row) count");
    fit_cmd->add_option("--cols", fit.cols, "Declared column count");
    fit_cmd->add_flag("--undirected", fit.undirected, "Read graph edges as undirected");
    fit_cmd->add_flag("--sum-duplicates", fit.sum_duplicates, "Sum repeated coordinates instead of rejecting them");
    fit_cmd->add_flag("--no-self-loops", fit.no_self_loops, "Reject self-loops");

    HierarchyArgs hier;
    auto* hier_cmd = app.add_subcommand("hierarchy", "Build the alpha-hierarchy of a fitted partition");
    hier_cmd->add_option("--from", hier.from, "Fit result JSON")->required();
    hier_cmd->add_option("--out", hier.out, "Hierarchy JSON")->required();
    hier_cmd->add_option("--dot", hier.dot, "Merge tree in DOT format");
    hier_cmd->add_option("--newick", hier.newick, "Merge tree in Newick format");
    hier_cmd->add_option("--cut-labels", hier.cut_labels, "Label file of the partition at the suggested cut");
    hier_cmd->add_option("--input", hier.input, "Dataset path overriding the one stored in the fit");

    GenerateArgs gen;
    auto* gen_cmd = app.add_subcommand("generate", "Sample a synthetic dataset with planted labels");
    gen_cmd->add_option("kind", gen.kind, "hier-sbm | mom")->required();
    gen_cmd->add_option("--spec", gen.spec, "Generator parameters: inline JSON object or JSON file");
    gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Dataset file")->required();
    gen_cmd->add_option("--format", gen.format, "Dataset format (edges-tsv for graphs, csv-counts for mom)")
        ->check(CLI::IsMember({"edges-tsv", "mm-coord", "csv-counts"}));
    gen_cmd->add_option("--labels", gen.labels, "Label file (default: OUT.labels)");
    gen_cmd->add_option("--super-labels", gen.super_labels, "Super-cluster label file (default: OUT.super.labels)");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Compare two label files");
    auto* nmi_cmd = eval_cmd->add_subcommand("nmi", "Normalized mutual information");
    eval_cmd->require_subcommand(1);
    nmi_cmd->add_option("--a", eval.a, "First label file")->required();
    nmi_cmd->add_option("--b", eval.b, "Second label file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*fit_cmd) return run_fit(fit);
        if (*hier_cmd) return run_hierarchy(hier);
        if (*gen_cmd) return run_generate(gen);
        if (*nmi_cmd) return run_eval(eval);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ModelMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
