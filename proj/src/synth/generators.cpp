#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "iclh/synth.hpp"

namespace iclh {
namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

void HierSbmSpec::validate() const {
    if (super_k < 1 || sub_per_super < 1) throw std::invalid_argument("cluster counts must be positive");
    if (n < super_k * sub_per_super) throw std::invalid_argument("n must be at least the number of communities");
    check_probability(p_sub, "p_sub");
    check_probability(p_super, "p_super");
    check_probability(p_out, "p_out");
}

HierSbmSample gen_hier_sbm(const HierSbmSpec& spec, Rng& rng) {
    spec.validate();
    const int communities = spec.super_k * spec.sub_per_super;
    std::vector<int> sub_labels(static_cast<std::size_t>(spec.n)), super_labels(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) {
        const int sub = static_cast<int>(static_cast<std::int64_t>(i) * communities / spec.n);
        sub_labels[static_cast<std::size_t>(i)] = sub;
        super_labels[static_cast<std::size_t>(i)] = sub / spec.sub_per_super;
    }
    std::vector<Entry> edges;
    for (int i = 0; i < spec.n; ++i) {
        for (int j = spec.directed ? 0 : i + 1; j < spec.n; ++j) {
            if (i == j) continue;
            const auto si = static_cast<std::size_t>(i);
            const auto sj = static_cast<std::size_t>(j);
            const double p = sub_labels[si] == sub_labels[sj]       ? spec.p_sub
                             : super_labels[si] == super_labels[sj] ? spec.p_super
                                                                    : spec.p_out;
            if (rng.uniform() < p) edges.push_back({i, j, 1});
        }
    }
    return {spec.directed ? Dataset::directed_graph(spec.n, std::move(edges), false)
                          : Dataset::undirected_graph(spec.n, std::move(edges), false),
            std::move(sub_labels), std::move(super_labels)};
}

void MomSpec::validate() const {
    if (n < 1 || k < 1 || d < 1 || draws < 1) throw std::invalid_argument("n, k, d and draws must be positive");
    if (boosted < 0 || boosted > d) throw std::invalid_argument("boosted must lie in [0, d]");
    if (!(boost_factor > 0.0)) throw std::invalid_argument("boost_factor must be positive");
}

MomSample gen_mom(const MomSpec& spec, Rng& rng) {
    spec.validate();
    std::vector<std::vector<double>> profiles;
    std::vector<int> outcomes(static_cast<std::size_t>(spec.d));
    for (int c = 0; c < spec.k; ++c) {
        std::vector<double> profile(static_cast<std::size_t>(spec.d), 1.0);
        std::iota(outcomes.begin(), outcomes.end(), 0);
        // Partial Fisher-Yates: the first `boosted` slots are a uniform subset.
        for (int b = 0; b < spec.boosted; ++b) {
            const auto pick = static_cast<std::size_t>(b) + rng.below(static_cast<std::uint64_t>(spec.d - b));
            std::swap(outcomes[static_cast<std::size_t>(b)], outcomes[pick]);
            profile[static_cast<std::size_t>(outcomes[static_cast<std::size_t>(b)])] = spec.boost_factor;
        }
        const double total = std::accumulate(profile.begin(), profile.end(), 0.0);
        for (auto& p : profile) p /= total;
        profiles.push_back(std::move(profile));
    }
    std::vector<std::vector<double>> cumulative;
    for (const auto& profile : profiles) {
        std::vector<double> cum(profile.size());
        std::partial_sum(profile.begin(), profile.end(), cum.begin());
        cumulative.push_back(std::move(cum));
    }

    std::vector<Entry> entries;
    std::vector<std::int64_t> row(static_cast<std::size_t>(spec.d));
    std::vector<int> labels(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) {
        const int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.k)));
        labels[static_cast<std::size_t>(i)] = c;
        const auto& cum = cumulative[static_cast<std::size_t>(c)];
        std::fill(row.begin(), row.end(), 0);
        for (int t = 0; t < spec.draws; ++t) {
            const double u = rng.uniform() * cum.back();
            const auto j = std::min<std::size_t>(
                static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin()), cum.size() - 1);
            ++row[j];
        }
        for (int j = 0; j < spec.d; ++j) {
            if (row[static_cast<std::size_t>(j)] > 0) entries.push_back({i, j, row[static_cast<std::size_t>(j)]});
        }
    }
    return {Dataset::count_matrix(spec.n, spec.d, std::move(entries)), std::move(labels), std::move(profiles)};
}

}  // namespace iclh
