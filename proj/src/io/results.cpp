#include <fstream>

#include "iclh/io.hpp"

namespace iclh {
namespace {

using nlohmann::json;

void check_version(const json& j, const char* kind) {
    if (!j.is_object() || !j.contains("schema_version")) throw SchemaError("missing schema_version");
    const std::string v = j.at("schema_version").get<std::string>();
    const std::string major = v.substr(0, v.find('.'));
    const std::string ours(schema_version);
    if (major != ours.substr(0, ours.find('.'))) throw SchemaError("unsupported schema version " + v);
    if (j.value("kind", std::string()) != kind) throw SchemaError(std::string("not a ") + kind + " result");
}

json source_json(const DatasetSource& s) {
    json j = {{"path", s.path},
              {"format", to_string(s.format)},
              {"kind", to_string(s.kind)},
              {"sum_duplicates", s.sum_duplicates},
              {"self_loops", s.self_loops}};
    j["rows"] = s.rows ? json(*s.rows) : json(nullptr);
    j["cols"] = s.cols ? json(*s.cols) : json(nullptr);
    return j;
}

DatasetSource source_from(const json& j) {
    DatasetSource s;
    s.path = j.at("path").get<std::string>();
    s.format = input_format_from_string(j.at("format").get<std::string>());
    s.kind = dataset_kind_from_string(j.at("kind").get<std::string>());
    s.sum_duplicates = j.at("sum_duplicates").get<bool>();
    s.self_loops = j.at("self_loops").get<bool>();
    if (!j.at("rows").is_null()) s.rows = j.at("rows").get<int>();
    if (!j.at("cols").is_null()) s.cols = j.at("cols").get<int>();
    return s;
}

template <class F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(std::string("malformed result file: ") + e.what());
    }
}

}  // namespace

json to_json(const FitRecord& fit) {
    json j;
    j["schema_version"] = schema_version;
    j["kind"] = "fit";
    j["tool"] = "iclh";
    j["tool_version"] = tool_version;
    j["model"] = to_string(fit.model);
    j["hyper"] = {{"alpha", fit.alpha}, {"beta", fit.hyper.beta}, {"eta0", fit.hyper.eta0}, {"zeta0", fit.hyper.zeta0}};
    j["config"] = {{"pop_size", fit.config.pop_size},
                   {"mutation_prob", fit.config.mutation_prob},
                   {"max_generations", fit.config.max_generations},
                   {"initial_k", fit.config.initial_k},
                   {"seed", fit.config.seed},
                   {"early_stop", fit.config.early_stop},
                   {"common_parent_moves", fit.config.common_parent_moves},
                   {"cluster_cap", fit.config.cluster_cap}};
    j["dataset"] = source_json(fit.source);
    j["dataset"]["n"] = fit.n;
    j["dataset"]["d"] = fit.d;
    j["partition"] = {{"k", fit.partition.k()},
                      {"row_count", fit.partition.row_count()},
                      {"labels", fit.partition.assignment()}};
    j["icl"] = {{"total", fit.icl.total},
                {"log_p_x_given_z", fit.icl.log_p_x_given_z},
                {"log_p_z_given_alpha", fit.icl.log_p_z_given_alpha},
                {"includes_data_constant", fit.icl.includes_data_constant}};
    j["history"] = fit.history;
    j["generations"] = fit.generations;
    j["timing"] = {{"wall_clock_seconds", fit.wall_clock_seconds}};
    return j;
}

FitRecord fit_from_json(const json& j) {
    check_version(j, "fit");
    return guarded([&] {
        FitRecord f;
        f.model = model_kind_from_string(j.at("model").get<std::string>());
        const json& h = j.at("hyper");
        f.alpha = h.at("alpha").get<double>();
        f.hyper.beta = h.at("beta").get<double>();
        f.hyper.eta0 = h.at("eta0").get<double>();
        f.hyper.zeta0 = h.at("zeta0").get<double>();
        const json& c = j.at("config");
        f.config.model = f.model;
        f.config.alpha = f.alpha;
        f.config.hyper = {f.hyper.beta, f.hyper.eta0, f.hyper.zeta0};
        f.config.pop_size = c.at("pop_size").get<int>();
        f.config.mutation_prob = c.at("mutation_prob").get<double>();
        f.config.max_generations = c.at("max_generations").get<int>();
        f.config.initial_k = c.at("initial_k").get<int>();
        f.config.seed = c.at("seed").get<std::uint64_t>();
        f.config.early_stop = c.at("early_stop").get<bool>();
        f.config.common_parent_moves = c.at("common_parent_moves").get<bool>();
        f.config.cluster_cap = c.at("cluster_cap").get<int>();
        f.source = source_from(j.at("dataset"));
        f.n = j.at("dataset").at("n").get<int>();
        f.d = j.at("dataset").at("d").get<int>();
        const json& p = j.at("partition");
        f.partition = Partition(p.at("labels").get<std::vector<int>>(), p.at("k").get<int>(), p.at("row_count").get<int>());
        if (!validate_partition(f.partition)) throw SchemaError("stored partition is invalid");
        const json& v = j.at("icl");
        f.icl.total = v.at("total").get<double>();
        f.icl.log_p_x_given_z = v.at("log_p_x_given_z").get<double>();
        f.icl.log_p_z_given_alpha = v.at("log_p_z_given_alpha").get<double>();
        f.icl.includes_data_constant = v.at("includes_data_constant").get<bool>();
        f.history = j.at("history").get<std::vector<double>>();
        f.generations = j.at("generations").get<int>();
        f.wall_clock_seconds = j.at("timing").at("wall_clock_seconds").get<double>();
        return f;
    });
}

json to_json(const HierarchyRecord& h) {
    const HierarchyPath& p = h.path;
    json j;
    j["schema_version"] = schema_version;
    j["kind"] = "hierarchy";
    j["tool"] = "iclh";
    j["tool_version"] = tool_version;
    j["fit"] = h.fit_path;
    j["model"] = to_string(h.model);
    j["leaves"] = p.leaves;
    j["initial"] = {{"labels", p.initial.assignment()},
                    {"row_count", p.initial.row_count()},
                    {"intercept", p.initial_intercept},
                    {"slope", p.initial_slope}};
    json steps = json::array();
    for (const auto& s : p.steps) {
        steps.push_back({{"left", s.left},
                         {"right", s.right},
                         {"node", s.node},
                         {"side", s.side},
                         {"log_alpha", s.log_alpha},
                         {"intercept", s.intercept},
                         {"slope", s.slope}});
    }
    j["steps"] = steps;
    json nodes = json::array();
    for (std::size_t id = 0; id < p.nodes.size(); ++id) {
        const TreeNode& n = p.nodes[id];
        nodes.push_back({{"id", id}, {"left", n.left}, {"right", n.right}, {"side", n.side}, {"height", n.height}});
    }
    j["tree"] = {{"nodes", nodes}, {"roots", p.roots}};
    json front = json::array();
    for (const auto& f : p.front) {
        front.push_back({{"level", f.level},
                         {"clusters", p.clusters_at_level(f.level)},
                         {"slope", f.slope},
                         {"intercept", f.intercept},
                         {"log_alpha", f.log_alpha}});
    }
    j["front"] = front;
    j["leaf_order"] = h.leaf_order;
    j["cut"] = {{"heuristic", "max-gap"},
                {"clusters", h.cut.clusters},
                {"level", h.cut.level},
                {"low_confidence", h.cut.low_confidence}};
    return j;
}

HierarchyRecord hierarchy_from_json(const json& j) {
    check_version(j, "hierarchy");
    return guarded([&] {
        HierarchyRecord h;
        h.fit_path = j.at("fit").get<std::string>();
        h.model = model_kind_from_string(j.at("model").get<std::string>());
        HierarchyPath& p = h.path;
        p.leaves = j.at("leaves").get<int>();
        const json& init = j.at("initial");
        p.initial = Partition::from_labels(init.at("labels").get<std::vector<int>>(), init.at("row_count").get<int>());
        p.initial_intercept = init.at("intercept").get<double>();
        p.initial_slope = init.at("slope").get<int>();
        for (const json& s : j.at("steps")) {
            p.steps.push_back({s.at("left").get<int>(), s.at("right").get<int>(), s.at("node").get<int>(),
                               s.at("side").get<int>(), s.at("log_alpha").get<double>(),
                               s.at("intercept").get<double>(), s.at("slope").get<int>()});
        }
        for (const json& n : j.at("tree").at("nodes")) {
            TreeNode t;
            t.left = n.at("left").get<int>();
            t.right = n.at("right").get<int>();
            t.side = n.at("side").get<int>();
            t.height = n.at("height").get<double>();
            p.nodes.push_back(t);
        }
        p.roots = j.at("tree").at("roots").get<std::vector<int>>();
        for (const json& f : j.at("front")) {
            p.front.push_back({f.at("level").get<int>(), f.at("slope").get<int>(), f.at("intercept").get<double>(),
                               f.at("log_alpha").get<double>()});
        }
        h.leaf_order = j.at("leaf_order").get<std::vector<int>>();
        const json& c = j.at("cut");
        h.cut.clusters = c.at("clusters").get<int>();
        h.cut.level = c.at("level").get<int>();
        h.cut.low_confidence = c.at("low_confidence").get<bool>();
        return h;
    });
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace iclh
