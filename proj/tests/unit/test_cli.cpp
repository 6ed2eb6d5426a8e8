#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "iclh/io.hpp"

namespace fs = std::filesystem;

namespace {

/// Scratch directory under the test's working directory.
fs::path scratch(const std::string& name) {
    const fs::path dir = fs::current_path() / "cli_scratch" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const fs::path& dir) {
    const fs::path captured = dir / "stdout.txt";
    const std::string cmd = std::string("\"") + ICLH_CLI_PATH + "\" " + args + " > \"" + captured.string() +
                            "\" 2> \"" + (dir / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(captured);
    std::ostringstream s;
    s << in.rdbuf();
    r.out = s.str();
    return r;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

nlohmann::json without_timing(nlohmann::json j) {
    j.erase("timing");
    return j;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes for bad input") {
    const fs::path dir = scratch("codes");
    write_file(dir / "bad.tsv", "0 1\nx 2\n");
    write_file(dir / "weighted.tsv", "0 1 3\n1 2 1\n");
    write_file(dir / "counts.csv", "1,2\n3,4\n");
    write_file(dir / "ok.tsv", "0 1\n1 2\n2 0\n");
    const fs::path out = dir / "fit.json";

    CHECK(run("fit --model sbm --input " + q(dir / "bad.tsv") + " --out " + q(out), dir).code == 2);
    CHECK(run("fit --model sbm --input " + q(dir / "missing.tsv") + " --out " + q(out), dir).code == 2);
    CHECK(run("fit --model sbm --input " + q(dir / "weighted.tsv") + " --out " + q(out), dir).code == 3);
    CHECK(run("fit --model sbm --format csv-counts --input " + q(dir / "counts.csv") + " --out " + q(out), dir).code ==
          3);
    CHECK(run("fit --model sbm --input " + q(dir / "ok.tsv") + " --out " + q(out) + " --pop-size 2 --generations 1",
              dir)
              .code == 0);

    write_file(dir / "bigger.tsv", "0 1\n1 2\n2 3\n");
    CHECK(run("hierarchy --from " + q(out) + " --out " + q(dir / "h.json") + " --input " + q(dir / "bigger.tsv"), dir)
              .code == 4);
    write_file(dir / "garbage.json", "{not json");
    CHECK(run("hierarchy --from " + q(dir / "garbage.json") + " --out " + q(dir / "h.json"), dir).code == 2);
    CHECK(run("generate hier-sbm --spec '{\"p_sub\": 2}' --out " + q(dir / "g.tsv"), dir).code == 2);
    CHECK(run("generate hier-sbm --spec '{\"bogus\": 1}' --out " + q(dir / "g.tsv"), dir).code == 2);
    CHECK(run("fit --model nonsense --input x --out y", dir).code != 0);
}

TEST_CASE("empty graph gives one cluster") {
    const fs::path dir = scratch("empty");
    write_file(dir / "empty.tsv", "# no edges\n");
    const fs::path out = dir / "fit.json";
    const Run r = run("fit --model sbm --nodes 20 --input " + q(dir / "empty.tsv") + " --out " + q(out), dir);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("k=1") != std::string::npos);
    const auto fit = iclh::fit_from_json(iclh::read_json_file(out.string()));
    CHECK(fit.partition.k() == 1);

    const fs::path h = dir / "h.json";
    REQUIRE(run("hierarchy --from " + q(out) + " --out " + q(h) + " --dot " + q(dir / "t.dot") + " --newick " +
                    q(dir / "t.nwk"),
                dir)
                .code == 0);
    const auto rec = iclh::hierarchy_from_json(iclh::read_json_file(h.string()));
    CHECK(rec.path.steps.empty());
    CHECK(slurp(dir / "t.nwk") == "C0;\n");
}

TEST_CASE("smoke run emits valid JSON") {
    const fs::path dir = scratch("smoke");
    write_file(dir / "m.csv", "1,0,2\n0,3,0\n2,0,1\n0,4,1\n");
    const fs::path out = dir / "fit.json";
    const Run r = run("fit --model mom --format csv-counts --generations 1 --pop-size 2 --input " + q(dir / "m.csv") +
                          " --out " + q(out),
                      dir);
    REQUIRE(r.code == 0);
    const auto fit = iclh::fit_from_json(iclh::read_json_file(out.string()));
    CHECK(fit.partition.size() == 4);
    CHECK(fit.history.size() == 1);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
}

TEST_CASE("fit and hierarchy are deterministic across thread counts") {
    const fs::path dir = scratch("determinism");
    const fs::path data = dir / "g.tsv";
    REQUIRE(run("generate hier-sbm --spec '{\"n\": 120}' --seed 5 --out " + q(data), dir).code == 0);
    const std::string base = "fit --model dcsbm --pop-size 8 --generations 3 --input " + q(data);
    REQUIRE(run(base + " --threads 1 --out " + q(dir / "a.json"), dir).code == 0);
    REQUIRE(run(base + " --threads 4 --out " + q(dir / "b.json"), dir).code == 0);
    const auto a = iclh::read_json_file((dir / "a.json").string());
    const auto b = iclh::read_json_file((dir / "b.json").string());
    CHECK(without_timing(a) == without_timing(b));
    CHECK(a.at("timing").contains("wall_clock_seconds"));

    REQUIRE(run("hierarchy --from " + q(dir / "a.json") + " --out " + q(dir / "ha.json"), dir).code == 0);
    REQUIRE(run("hierarchy --from " + q(dir / "a.json") + " --out " + q(dir / "hb.json"), dir).code == 0);
    CHECK(slurp(dir / "ha.json") == slurp(dir / "hb.json"));
}

TEST_CASE("generate is reproducible and eval of a file with itself is one") {
    const fs::path dir = scratch("generate");
    REQUIRE(run("generate mom --spec '{\"n\": 60, \"k\": 3}' --seed 9 --out " + q(dir / "a.csv"), dir).code == 0);
    REQUIRE(run("generate mom --spec '{\"n\": 60, \"k\": 3}' --seed 9 --out " + q(dir / "b.csv"), dir).code == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.csv.labels") == slurp(dir / "b.csv.labels"));
    CHECK_FALSE(slurp(dir / "a.csv").empty());
    const Run r = run("eval nmi --a " + q(dir / "a.csv.labels") + " --b " + q(dir / "a.csv.labels"), dir);
    CHECK(r.code == 0);
    CHECK(r.out == "1.000000\n");
    write_file(dir / "short.labels", "0\n1\n");
    CHECK(run("eval nmi --a " + q(dir / "a.csv.labels") + " --b " + q(dir / "short.labels"), dir).code == 4);
}

TEST_CASE("generate, fit, hierarchy and eval pipeline") {
    const fs::path dir = scratch("pipeline");
    const fs::path data = dir / "g.tsv";
    REQUIRE(run("generate hier-sbm --spec '{\"n\": 300, \"p_sub\": 0.3, \"p_super\": 0.05}' --seed 3 --out " + q(data),
                dir)
                .code == 0);
    REQUIRE(run("fit --model sbm --pop-size 10 --generations 4 --input " + q(data) + " --out " +
                    q(dir / "fit.json") + " --labels " + q(dir / "fit.labels"),
                dir)
                .code == 0);
    REQUIRE(run("hierarchy --from " + q(dir / "fit.json") + " --out " + q(dir / "h.json") + " --dot " +
                    q(dir / "t.dot") + " --newick " + q(dir / "t.nwk") + " --cut-labels " + q(dir / "cut.labels"),
                dir)
                .code == 0);
    const auto fit = iclh::fit_from_json(iclh::read_json_file((dir / "fit.json").string()));
    const Run r = run("eval nmi --a " + q(dir / "fit.labels") + " --b " + q(data.string() + ".labels"), dir);
    REQUIRE(r.code == 0);
    CHECK(std::stod(r.out) > 0.5);
    const auto h_rec = iclh::hierarchy_from_json(iclh::read_json_file((dir / "h.json").string()));
    std::ifstream cut_in(dir / "cut.labels");
    const auto cut = iclh::read_labels(cut_in);
    CHECK(cut.size() == fit.partition.assignment().size());
    CHECK(static_cast<int>(std::set<int>(cut.begin(), cut.end()).size()) == h_rec.cut.clusters);

    const std::string nwk = slurp(dir / "t.nwk");
    std::size_t leaves = 0;
    for (char c : nwk) leaves += c == 'C';
    CHECK(leaves == static_cast<std::size_t>(fit.partition.k()));

    // DOT heights agree with the JSON tree.
    const auto h = iclh::read_json_file((dir / "h.json").string());
    const std::string dot = slurp(dir / "t.dot");
    for (const auto& node : h.at("tree").at("nodes")) {
        const std::string tag = "  n" + std::to_string(node.at("id").get<int>()) + " [";
        const auto at = dot.find(tag);
        REQUIRE(at != std::string::npos);
        const auto hv = dot.find("neglog_alpha=", at);
        CHECK(std::stod(dot.substr(hv + 13)) == node.at("height").get<double>());
    }
}

}  // TEST_SUITE
