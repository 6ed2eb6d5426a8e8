#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "iclh/synth.hpp"

using namespace iclh;

namespace {

/// Direct sum over the contingency table, natural logs throughout.
double nmi_by_hand(const std::vector<int>& a, const std::vector<int>& b) {
    const double n = static_cast<double>(a.size());
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> pa, pb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], b[i]}] += 1.0 / n;
        pa[a[i]] += 1.0 / n;
        pb[b[i]] += 1.0 / n;
    }
    double mi = 0.0, ha = 0.0, hb = 0.0;
    for (const auto& [key, p] : joint) mi += p * std::log(p / (pa[key.first] * pb[key.second]));
    for (const auto& [k, p] : pa) ha -= p * std::log(p);
    for (const auto& [k, p] : pb) hb -= p * std::log(p);
    return mi / std::sqrt(ha * hb);
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("equal tier probabilities give an Erdos-Renyi graph") {
    HierSbmSpec spec;
    spec.n = 300;
    spec.p_sub = spec.p_super = spec.p_out = 0.05;
    Rng rng(1);
    const HierSbmSample s = gen_hier_sbm(spec, rng);
    const double pairs = 300.0 * 299.0;
    const double edges = static_cast<double>(s.data.entries().size());
    CHECK(std::abs(edges - 0.05 * pairs) <= 3.0 * std::sqrt(pairs * 0.05 * 0.95));
}

TEST_CASE("default hierarchical SBM has the planted within-community density") {
    const HierSbmSpec spec;
    CHECK(spec.n == 1500);
    CHECK(spec.super_k == 3);
    CHECK(spec.sub_per_super == 5);
    Rng rng(2);
    const HierSbmSample s = gen_hier_sbm(spec, rng);
    double inside = 0.0, cells = 0.0;
    std::vector<double> sizes(15, 0.0);
    for (int l : s.sub_labels) sizes[static_cast<std::size_t>(l)] += 1.0;
    for (double m : sizes) cells += m * (m - 1.0);
    for (const auto& e : s.data.entries()) {
        CHECK(e.row != e.col);
        if (s.sub_labels[static_cast<std::size_t>(e.row)] == s.sub_labels[static_cast<std::size_t>(e.col)]) inside += 1.0;
    }
    CHECK(std::abs(inside / cells - 0.1) <= 3.0 * std::sqrt(0.1 * 0.9 / cells));
    std::set<int> subs(s.sub_labels.begin(), s.sub_labels.end());
    CHECK(subs.size() == 15);
    for (std::size_t i = 0; i < s.sub_labels.size(); ++i) CHECK(s.super_labels[i] == s.sub_labels[i] / 5);
    CHECK(s.data.kind() == DatasetKind::DirectedGraph);
}

TEST_CASE("hierarchical SBM is reproducible and validates its parameters") {
    HierSbmSpec spec;
    spec.n = 200;
    Rng a(3), b(3);
    const auto x = gen_hier_sbm(spec, a);
    const auto y = gen_hier_sbm(spec, b);
    REQUIRE(x.data.entries().size() == y.data.entries().size());
    for (std::size_t e = 0; e < x.data.entries().size(); ++e) {
        CHECK(x.data.entries()[e].row == y.data.entries()[e].row);
        CHECK(x.data.entries()[e].col == y.data.entries()[e].col);
    }
    CHECK(x.data.kind() == DatasetKind::DirectedGraph);
    spec.directed = false;
    Rng c(3);
    const auto u = gen_hier_sbm(spec, c);
    CHECK(u.data.kind() == DatasetKind::UndirectedGraph);
    for (const auto& e : u.data.entries()) CHECK(e.row < e.col);
    spec.p_sub = 1.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = HierSbmSpec{};
    spec.n = 10;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("default multinomial mixture rows sum to the number of draws") {
    const MomSpec spec;
    CHECK(spec.n == 500);
    CHECK(spec.k == 15);
    CHECK(spec.d == 100);
    CHECK(spec.boosted == 10);
    CHECK(spec.boost_factor == 4.0);
    CHECK(spec.draws == 50);
    Rng rng(4);
    const MomSample s = gen_mom(spec, rng);
    for (int i = 0; i < spec.n; ++i) CHECK(s.data.row_totals()[static_cast<std::size_t>(i)] == 50);
    CHECK(s.labels.size() == 500u);
    for (const auto& p : s.profiles) {
        int boosted = 0;
        double total = 0.0;
        for (double v : p) {
            total += v;
            boosted += v > 1.5 / 130.0;
        }
        CHECK(total == doctest::Approx(1.0));
        CHECK(boosted == 10);
        for (double v : p) CHECK((v == doctest::Approx(1.0 / 130.0) || v == doctest::Approx(4.0 / 130.0)));
    }
}

TEST_CASE("empirical outcome frequencies follow the profile") {
    MomSpec spec;
    spec.n = 4000;
    spec.k = 2;
    spec.d = 8;
    spec.boosted = 2;
    spec.draws = 50;
    Rng rng(5);
    const MomSample s = gen_mom(spec, rng);
    for (int c = 0; c < 2; ++c) {
        std::vector<double> counts(8, 0.0);
        double total = 0.0;
        for (const auto& e : s.data.entries()) {
            if (s.labels[static_cast<std::size_t>(e.row)] != c) continue;
            counts[static_cast<std::size_t>(e.col)] += static_cast<double>(e.value);
            total += static_cast<double>(e.value);
        }
        double chi2 = 0.0;
        for (int j = 0; j < 8; ++j) {
            const double expected = total * s.profiles[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
            chi2 += (counts[static_cast<std::size_t>(j)] - expected) * (counts[static_cast<std::size_t>(j)] - expected) / expected;
        }
        // 7 degrees of freedom; 24.3 is the 0.999 quantile.
        CHECK(chi2 < 24.3);
    }
}

TEST_CASE("boost factor one gives identical uniform profiles") {
    MomSpec spec;
    spec.n = 50;
    spec.boost_factor = 1.0;
    Rng rng(6);
    const MomSample s = gen_mom(spec, rng);
    for (const auto& p : s.profiles) {
        for (double v : p) CHECK(v == doctest::Approx(1.0 / 100.0));
    }
    spec.boosted = 101;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("nmi conventions") {
    const std::vector<int> p{0, 0, 1, 1, 2, 2};
    CHECK(nmi(p, p) == doctest::Approx(1.0));
    CHECK(nmi(p, std::vector<int>{2, 2, 0, 0, 1, 1}) == doctest::Approx(1.0));
    CHECK(nmi(std::vector<int>{0, 0, 0}, std::vector<int>{0, 1, 2}) == 0.0);
    CHECK(nmi(std::vector<int>{0, 0, 0}, std::vector<int>{0, 0, 0}) == 0.0);
    CHECK(nmi(std::vector<int>{0, 0, 1, 1}, std::vector<int>{0, 1, 0, 1}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(nmi(std::vector<int>{0, 1}, std::vector<int>{0}), std::invalid_argument);
    CHECK(nmi(Partition({0, 0, 1}, 2), Partition({1, 1, 0}, 2)) == doctest::Approx(1.0));
}

TEST_CASE("nmi matches the contingency-table formula and is symmetric") {
    Rng rng(7);
    for (int t = 0; t < 100; ++t) {
        std::vector<int> a(30), b(30);
        for (auto& l : a) l = static_cast<int>(rng.below(4));
        for (auto& l : b) l = static_cast<int>(rng.below(3));
        const double v = nmi(a, b);
        CHECK(v == doctest::Approx(nmi(b, a)).epsilon(1e-12));
        CHECK(v == doctest::Approx(nmi_by_hand(a, b)).epsilon(1e-10));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-12);
        std::vector<int> relabelled = a;
        for (auto& l : relabelled) l = 3 - l;
        CHECK(nmi(relabelled, b) == doctest::Approx(v).epsilon(1e-12));
    }
}

}  // TEST_SUITE
