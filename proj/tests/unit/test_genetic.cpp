#include <doctest.h>

#include <map>
#include <set>

#include "iclh/genetic.hpp"
#include "iclh/synth.hpp"
#include "instances.hpp"

using namespace iclh;
using testing_support::random_dataset;

namespace {

std::shared_ptr<const Dataset> share(Dataset ds) { return std::make_shared<const Dataset>(std::move(ds)); }

/// Every child cluster sits inside exactly one parent cluster.
bool refines(const Partition& child, const Partition& parent) {
    std::map<int, int> image;
    for (int i = 0; i < child.size(); ++i) {
        const auto [it, fresh] = image.try_emplace(child[static_cast<std::size_t>(i)], parent[static_cast<std::size_t>(i)]);
        if (!fresh && it->second != parent[static_cast<std::size_t>(i)]) return false;
    }
    return true;
}

/// Planted two-block directed graph.
HierSbmSample two_blocks(std::uint64_t seed) {
    HierSbmSpec spec;
    spec.n = 60;
    spec.super_k = 2;
    spec.sub_per_super = 1;
    spec.p_sub = 0.3;
    spec.p_super = 0.02;
    spec.p_out = 0.02;
    Rng rng(seed);
    return gen_hier_sbm(spec, rng);
}

}  // namespace

TEST_SUITE("genetic") {

TEST_CASE("cross partition shatters orthogonal parents") {
    const Partition a({0, 0, 1, 1}, 2), b({0, 1, 0, 1}, 2);
    CHECK(cross_partition(a, b).assignment() == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("cross partition is idempotent and refines both parents") {
    Rng rng(81);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> la(25), lb(25);
        for (auto& l : la) l = static_cast<int>(rng.below(4));
        for (auto& l : lb) l = static_cast<int>(rng.below(6));
        const Partition a = Partition::from_labels(la), b = Partition::from_labels(lb);
        CHECK(cross_partition(a, a) == a);
        const Partition c = cross_partition(a, b);
        CHECK(refines(c, a));
        CHECK(refines(c, b));
        CHECK(c.k() <= a.k() * b.k());
        CHECK(relabel_canonical(c) == c);
    }
    CHECK_THROWS_AS(cross_partition(Partition({0, 0}, 1), Partition({0, 0, 0}, 1)), std::invalid_argument);
}

TEST_CASE("cross partition keeps bipartition sides") {
    const Partition a({0, 0, 1, 2, 2}, 3, 2), b({0, 1, 2, 2, 3}, 4, 2);
    const Partition c = cross_partition(a, b);
    CHECK(validate_partition(c));
    CHECK(c.row_count() == 2);
}

TEST_CASE("split mutation edge cases") {
    Rng rng(82);
    const Partition singletons({0, 1, 2}, 3);
    CHECK(mutate_split(singletons, rng) == singletons);
    CHECK(mutate_split_labelled(singletons, rng).split == -1);
    for (int t = 0; t < 20; ++t) {
        const Partition s = mutate_split(Partition({0, 0}, 1), rng);
        CHECK(s.k() == 2);
        CHECK(s[0] != s[1]);
    }
}

TEST_CASE("split mutation picks each 2|1 split of a triple equally often") {
    Rng rng(83);
    std::map<std::vector<int>, int> counts;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const Partition s = mutate_split(Partition({0, 0, 0}, 1), rng);
        REQUIRE(s.k() == 2);
        ++counts[relabel_canonical(s).assignment()];
    }
    CHECK(counts.size() == 3);
    for (const auto& [labels, c] : counts) CHECK(std::abs(static_cast<double>(c) / trials - 1.0 / 3.0) <= 0.02);
}

TEST_CASE("split mutation adds exactly one cluster") {
    Rng rng(84);
    for (int t = 0; t < 200; ++t) {
        std::vector<int> labels(12);
        for (auto& l : labels) l = static_cast<int>(rng.below(4));
        const Partition p = Partition::from_labels(labels);
        const SplitOutcome s = mutate_split_labelled(p, rng);
        if (s.split < 0) continue;
        CHECK(s.partition.k() == p.k() + 1);
        CHECK(refines(s.partition, p));
        for (int i = 0; i < p.size(); ++i) {
            if (s.partition[static_cast<std::size_t>(i)] != p[static_cast<std::size_t>(i)]) {
                CHECK(s.partition[static_cast<std::size_t>(i)] == p.k());
                CHECK(p[static_cast<std::size_t>(i)] == s.split);
            }
        }
    }
}

TEST_CASE("rank selection probabilities") {
    Rng rng(85);
    {
        const std::vector<double> icl{-10.0, -3.0};
        int better = 0;
        const int draws = 60000;
        for (const auto& [a, b] : rank_select_pairs(icl, draws / 2, rng)) {
            CHECK(a != b);
            better += (a == 1) + (b == 1);
        }
        // Distinct pairs always contain both members when V = 2.
        CHECK(better == draws / 2);
    }
    {
        const std::vector<double> icl{-1.0, -5.0, -3.0};  // ranks 3, 1, 2
        std::vector<int> first(3, 0);
        const int draws = 100000;
        Rng r2(86);
        for (int t = 0; t < draws; ++t) {
            const auto pairs = rank_select_pairs(icl, 1, r2);
            ++first[static_cast<std::size_t>(pairs[0].first)];
        }
        CHECK(std::abs(first[0] / double(draws) - 3.0 / 6.0) <= 0.01);
        CHECK(std::abs(first[1] / double(draws) - 1.0 / 6.0) <= 0.01);
        CHECK(std::abs(first[2] / double(draws) - 2.0 / 6.0) <= 0.01);
    }
    {
        const std::vector<double> equal(4, -2.0);
        std::vector<int> first(4, 0);
        for (int t = 0; t < 40000; ++t) ++first[static_cast<std::size_t>(rank_select_pairs(equal, 1, rng)[0].first)];
        // Stable ranks 1..4 by index.
        for (int i = 0; i < 4; ++i) CHECK(std::abs(first[static_cast<std::size_t>(i)] / 40000.0 - (i + 1) / 10.0) <= 0.01);
    }
    CHECK_THROWS_AS(rank_select_pairs(std::vector<double>{1.0}, 1, rng), std::invalid_argument);
}

TEST_CASE("the better of two members is the first pick two times in three") {
    Rng rng(87);
    const std::vector<double> icl{-10.0, -3.0};
    int better = 0;
    const int draws = 60000;
    for (int t = 0; t < draws; ++t) better += rank_select_pairs(icl, 1, rng)[0].first == 1;
    CHECK(std::abs(better / double(draws) - 2.0 / 3.0) <= 0.01);
}

TEST_CASE("random partitions and the initial population") {
    Rng rng(88);
    const auto bip = random_dataset(ModelKind::DcLbm, rng, 6, 4, 3);
    for (int t = 0; t < 20; ++t) {
        const Partition p = random_partition(*bip, 20, rng);
        CHECK(validate_partition(p, *bip));
        CHECK(p.row_clusters() <= bip->n());
    }
    CHECK_THROWS_AS(random_partition(*bip, 0, rng), std::invalid_argument);

    const auto ds = random_dataset(ModelKind::Mom, rng, 6, 4, 3);
    RunConfig config;
    config.model = ModelKind::Mom;
    config.initial_k = 1;
    config.pop_size = 5;
    const Population pop = init_population(make_context(ds, config), config);
    CHECK(pop.members.size() == 5);
    for (const auto& m : pop.members) CHECK(m.partition.k() == 1);
}

TEST_CASE("population members are valid and the best index is an argmax") {
    HierSbmSample sample = two_blocks(5);
    const auto ds = share(std::move(sample.data));
    RunConfig config;
    config.pop_size = 8;
    const Population pop = init_population(make_context(ds, config), config);
    for (const auto& m : pop.members) {
        CHECK(validate_partition(m.partition, *ds));
        CHECK(m.icl.total <= pop.members[static_cast<std::size_t>(pop.best)].icl.total);
    }
}

TEST_CASE("one generation returns the best initial member") {
    HierSbmSample sample = two_blocks(6);
    const auto ds = share(std::move(sample.data));
    RunConfig config;
    config.pop_size = 6;
    config.max_generations = 1;
    const auto ctx = make_context(ds, config);
    const Population pop = init_population(ctx, config);
    const FitOutcome fit = hybrid_fit(ctx, config);
    CHECK(fit.best == pop.members[static_cast<std::size_t>(pop.best)].partition);
    CHECK(fit.history.size() == 1);
    CHECK(fit.generations == 1);
}

TEST_CASE("best ICL never decreases across generations") {
    Rng rng(89);
    for (const ModelKind kind : testing_support::all_models) {
        const auto ds = random_dataset(kind, rng, 25, 12, 3);
        RunConfig config;
        config.model = kind;
        config.pop_size = 10;
        config.max_generations = 6;
        config.initial_k = 6;
        const FitOutcome fit = hybrid_fit(ds, config);
        REQUIRE(fit.history.size() == 6);
        for (std::size_t g = 1; g < fit.history.size(); ++g) CHECK(fit.history[g] >= fit.history[g - 1]);
        CHECK(fit.icl.total == fit.history.back());
        CHECK(validate_partition(fit.best, *ds));
    }
}

TEST_CASE("early stop ends after three unchanged generations") {
    const auto ds = share(Dataset::directed_graph(8, {}));
    RunConfig config;
    config.pop_size = 4;
    config.max_generations = 50;
    config.early_stop = true;
    const FitOutcome fit = hybrid_fit(ds, config);
    CHECK(fit.history.size() == 4);
    CHECK(fit.best.k() == 1);
}

TEST_CASE("hybrid fit is reproducible and thread independent") {
    HierSbmSample sample = two_blocks(7);
    const auto ds = share(std::move(sample.data));
    RunConfig config;
    config.pop_size = 12;
    config.max_generations = 4;
    const FitOutcome a = hybrid_fit(ds, config);
    config.threads = 4;
    const FitOutcome b = hybrid_fit(ds, config);
    CHECK(a.best == b.best);
    CHECK(a.history == b.history);
    config.seed += 1;
    const FitOutcome c = hybrid_fit(ds, config);
    CHECK(c.history.size() == a.history.size());
}

TEST_CASE("planted two-block graphs are recovered") {
    int perfect = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        HierSbmSample sample = two_blocks(100 + seed);
        const auto ds = share(std::move(sample.data));
        RunConfig config;
        config.seed = seed;
        const FitOutcome fit = hybrid_fit(ds, config);
        perfect += nmi(fit.best.assignment(), sample.sub_labels) == doctest::Approx(1.0);
    }
    CHECK(perfect >= 9);
}

TEST_CASE("greedy fits") {
    HierSbmSample sample = two_blocks(8);
    const auto ds = share(std::move(sample.data));
    RunConfig config;
    config.threads = 3;
    const auto ctx = make_context(ds, config);
    const FitOutcome one = greedy_fit(ctx, config, 0);
    CHECK(validate_partition(one.best, *ds));
    const FitOutcome many = multistart_greedy_fit(ctx, config, 5);
    REQUIRE(many.history.size() == 5);
    CHECK(many.history[0] == one.icl.total);
    for (double v : many.history) CHECK(v <= many.icl.total);
    CHECK_THROWS_AS(multistart_greedy_fit(ctx, config, 0), std::invalid_argument);
}

TEST_CASE("the cluster cap falls back to a parent") {
    Rng rng(90);
    const auto ds = random_dataset(ModelKind::Mom, rng, 6, 4, 3);
    RunConfig config;
    config.model = ModelKind::Mom;
    config.cluster_cap = 1;
    config.pop_size = 4;
    config.max_generations = 3;
    config.initial_k = 3;
    const FitOutcome fit = hybrid_fit(ds, config);
    CHECK(validate_partition(fit.best, *ds));
}

}  // TEST_SUITE
