// Block models on ordered pairs: binary SBM / Bernoulli LBM (Beta-Bernoulli
// blocks) and their degree-corrected Poisson variants (Gamma-Poisson blocks
// plus per-cluster degree terms).
//
// Co-clustering is handled as a directed graph over n + d nodes with arcs
// from row i to column node n + j. Blocks between two clusters of the same
// side then hold no cells and contribute nothing, so one implementation
// serves both families.

#include <algorithm>
#include <cmath>
#include <vector>

#include "icl/model_stats.hpp"

namespace iclh {
namespace {

struct Arc {
    int node;
    std::int64_t value;
};

/// Node adjacency in ordered-pair form, self pairs kept apart.
struct Arcs {
    int nodes = 0;
    bool bipartite = false;
    std::vector<std::int64_t> out_offset, in_offset;
    std::vector<Arc> out, in;
    std::vector<std::int64_t> self, out_degree, in_degree;

    std::span<const Arc> out_of(int u) const {
        return {out.data() + out_offset[static_cast<std::size_t>(u)],
                static_cast<std::size_t>(out_offset[static_cast<std::size_t>(u) + 1] -
                                         out_offset[static_cast<std::size_t>(u)])};
    }
    std::span<const Arc> in_of(int u) const {
        return {in.data() + in_offset[static_cast<std::size_t>(u)],
                static_cast<std::size_t>(in_offset[static_cast<std::size_t>(u) + 1] -
                                         in_offset[static_cast<std::size_t>(u)])};
    }
};

Arcs build_arcs(const Dataset& ds) {
    Arcs a;
    a.bipartite = ds.is_bipartite();
    a.nodes = ds.element_count();
    const auto nodes = static_cast<std::size_t>(a.nodes);
    a.out_offset.assign(nodes + 1, 0);
    a.in_offset.assign(nodes + 1, 0);
    a.self.assign(nodes, 0);
    a.out_degree.assign(nodes, 0);
    a.in_degree.assign(nodes, 0);

    const int col_shift = a.bipartite ? ds.n() : 0;
    const auto& rows = ds.out();
    std::vector<std::pair<int, Arc>> arcs;  // (source, target arc)
    for (int i = 0; i < ds.n(); ++i) {
        for (auto p = rows.begin(i); p < rows.end(i); ++p) {
            const int j = rows.index[static_cast<std::size_t>(p)] + col_shift;
            const std::int64_t x = rows.value[static_cast<std::size_t>(p)];
            a.out_degree[static_cast<std::size_t>(i)] += x;
            a.in_degree[static_cast<std::size_t>(j)] += x;
            if (i == j) {
                a.self[static_cast<std::size_t>(i)] += x;
            } else {
                arcs.push_back({i, {j, x}});
            }
        }
    }
    for (const auto& [src, arc] : arcs) {
        ++a.out_offset[static_cast<std::size_t>(src) + 1];
        ++a.in_offset[static_cast<std::size_t>(arc.node) + 1];
    }
    for (std::size_t u = 0; u < nodes; ++u) {
        a.out_offset[u + 1] += a.out_offset[u];
        a.in_offset[u + 1] += a.in_offset[u];
    }
    a.out.resize(arcs.size());
    a.in.resize(arcs.size());
    std::vector<std::int64_t> oc(a.out_offset.begin(), a.out_offset.end() - 1);
    std::vector<std::int64_t> ic(a.in_offset.begin(), a.in_offset.end() - 1);
    for (const auto& [src, arc] : arcs) {
        a.out[static_cast<std::size_t>(oc[static_cast<std::size_t>(src)]++)] = arc;
        a.in[static_cast<std::size_t>(ic[static_cast<std::size_t>(arc.node)]++)] = {src, arc.value};
    }
    return a;
}

/// Beta(eta0, zeta0)-Bernoulli blocks over the off-diagonal pairs.
class BernoulliBlocks {
public:
    static constexpr bool degree_corrected = false;

    BernoulliBlocks(const ResolvedHyper& h, std::int64_t max_edges, std::int64_t max_cells)
        : eta_(h.eta0, max_edges),
          zeta_(h.zeta0, max_cells),
          sum_(h.eta0 + h.zeta0, max_cells),
          head_(log_gamma(h.eta0 + h.zeta0) - log_gamma(h.eta0) - log_gamma(h.zeta0)) {}

    double block(std::int64_t edges, std::int64_t cells) const {
        if (cells == 0) return 0.0;
        return head_ + eta_(edges) + zeta_(cells - edges) - sum_(cells);
    }
    static std::int64_t diagonal_cells(std::int64_t n) { return n * (n - 1); }
    double cluster(std::int64_t, std::int64_t, std::int64_t) const { return 0.0; }

private:
    LogGammaTable eta_, zeta_, sum_;
    double head_;
};

/// Exponential(mean beta)-Poisson blocks with uniform-simplex degree
/// parameters inside each cluster.
class PoissonBlocks {
public:
    static constexpr bool degree_corrected = true;

    PoissonBlocks(const ResolvedHyper& h, std::int64_t total, int nodes)
        : beta_(h.beta), log_beta_(std::log(h.beta)), factorial_(1.0, total), gamma_(0.0, nodes + total) {
        log_n_.resize(static_cast<std::size_t>(nodes) + 1, 0.0);
        for (int m = 1; m <= nodes; ++m) log_n_[static_cast<std::size_t>(m)] = std::log(static_cast<double>(m));
    }

    double block(std::int64_t count, std::int64_t cells) const {
        if (cells == 0) return 0.0;
        return factorial_(count) + static_cast<double>(count) * log_beta_ -
               static_cast<double>(count + 1) * std::log1p(beta_ * static_cast<double>(cells));
    }
    static std::int64_t diagonal_cells(std::int64_t n) { return n * n; }

    double cluster(std::int64_t n, std::int64_t out_sum, std::int64_t in_sum) const {
        if (n == 0) return 0.0;
        return degree_term(n, out_sum) + degree_term(n, in_sum);
    }

private:
    // log[(n-1)! n^D / (n+D-1)!]
    double degree_term(std::int64_t n, std::int64_t degree) const {
        if (degree == 0) return 0.0;
        return gamma_(n) + static_cast<double>(degree) * log_n_[static_cast<std::size_t>(n)] - gamma_(n + degree);
    }

    double beta_, log_beta_;
    LogGammaTable factorial_;  // log Gamma(1 + m)
    LogGammaTable gamma_;      // log Gamma(m)
    std::vector<double> log_n_;
};

template <class Obs>
class BlockEngine;

template <class Obs>
class BlockStats final : public ModelStats {
public:
    BlockStats(const BlockEngine<Obs>& engine, const Clustering& c);

    std::unique_ptr<ModelStats> clone() const override { return std::make_unique<BlockStats>(*this); }
    double log_likelihood(const Clustering& c) const override;
    void swap_deltas(const Clustering& c, int u, std::span<const int> targets, std::span<double> out) const override;
    void apply_swap(const Clustering& c, int u, int to) override;
    double merge_delta(const Clustering& c, int keep, int drop) const override;
    double merge_cross_term(const Clustering& c, int keep, int drop, int l) const override;
    void apply_merge(const Clustering& c, int keep, int drop) override;
    void move_cluster(const Clustering& c, int from, int to) override;
    void refresh(const Clustering& c, int a, int b) override;

private:
    std::size_t at(int a, int b) const { return static_cast<std::size_t>(a) * stride_ + static_cast<std::size_t>(b); }
    std::int64_t e(int a, int b) const { return e_[at(a, b)]; }
    double f(int a, int b) const { return f_[at(a, b)]; }

    /// Cells of block (a, b) for clusters on sides (sa, sb) with sizes (na, nb).
    std::int64_t cells(int sa, int sb, std::int64_t na, std::int64_t nb, bool diagonal) const {
        if (bipartite_) return (sa == 0 && sb == 1) ? na * nb : 0;
        return diagonal ? Obs::diagonal_cells(na) : na * nb;
    }
    double term(const Clustering& c, int a, int b) const {
        return obs_->block(e(a, b), cells(c.side[static_cast<std::size_t>(a)], c.side[static_cast<std::size_t>(b)],
                                          c.size[static_cast<std::size_t>(a)], c.size[static_cast<std::size_t>(b)],
                                          a == b));
    }
    double cluster_term(const Clustering& c, int k) const {
        return obs_->cluster(c.size[static_cast<std::size_t>(k)], out_sum_[static_cast<std::size_t>(k)],
                             in_sum_[static_cast<std::size_t>(k)]);
    }

    const Arcs* arcs_;
    const Obs* obs_;
    bool bipartite_;
    std::size_t stride_;
    std::vector<std::int64_t> e_;
    std::vector<double> f_;
    std::vector<std::int64_t> out_sum_, in_sum_;
    std::vector<double> cterm_;
};

template <class Obs>
class BlockEngine final : public ModelEngine {
public:
    BlockEngine(Arcs arcs, Obs obs, double constant)
        : arcs_(std::move(arcs)), obs_(std::move(obs)), constant_(constant) {}

    std::unique_ptr<ModelStats> make_stats(const Clustering& c) const override {
        return std::make_unique<BlockStats<Obs>>(*this, c);
    }
    double data_constant() const override { return constant_; }

    Arcs arcs_;
    Obs obs_;
    double constant_;
};

template <class Obs>
BlockStats<Obs>::BlockStats(const BlockEngine<Obs>& engine, const Clustering& c)
    : arcs_(&engine.arcs_),
      obs_(&engine.obs_),
      bipartite_(engine.arcs_.bipartite),
      stride_(static_cast<std::size_t>(c.k())),
      e_(stride_ * stride_, 0),
      f_(stride_ * stride_, 0.0),
      out_sum_(stride_, 0),
      in_sum_(stride_, 0),
      cterm_(stride_, 0.0) {
    const Arcs& a = *arcs_;
    for (int u = 0; u < a.nodes; ++u) {
        const int g = c.label[static_cast<std::size_t>(u)];
        for (const Arc& arc : a.out_of(u)) e_[at(g, c.label[static_cast<std::size_t>(arc.node)])] += arc.value;
        if constexpr (Obs::degree_corrected) {
            e_[at(g, g)] += a.self[static_cast<std::size_t>(u)];
            out_sum_[static_cast<std::size_t>(g)] += a.out_degree[static_cast<std::size_t>(u)];
            in_sum_[static_cast<std::size_t>(g)] += a.in_degree[static_cast<std::size_t>(u)];
        }
    }
    for (int x = 0; x < c.k(); ++x) {
        for (int y = 0; y < c.k(); ++y) f_[at(x, y)] = term(c, x, y);
        cterm_[static_cast<std::size_t>(x)] = cluster_term(c, x);
    }
}

template <class Obs>
double BlockStats<Obs>::log_likelihood(const Clustering& c) const {
    double s = 0.0;
    for (int x = 0; x < c.k(); ++x) {
        for (int y = 0; y < c.k(); ++y) s += f(x, y);
        s += cterm_[static_cast<std::size_t>(x)];
    }
    return s;
}

template <class Obs>
void BlockStats<Obs>::swap_deltas(const Clustering& c, int u, std::span<const int> targets,
                                  std::span<double> out) const {
    const Arcs& a = *arcs_;
    const int K = c.k();
    const int g = c.label[static_cast<std::size_t>(u)];
    const auto& size = c.size;
    const auto& side = c.side;
    const int sg = side[static_cast<std::size_t>(g)];

    std::vector<std::int64_t> to_cluster(static_cast<std::size_t>(K), 0);    // arcs u -> cluster
    std::vector<std::int64_t> from_cluster(static_cast<std::size_t>(K), 0);  // arcs cluster -> u
    for (const Arc& arc : a.out_of(u)) to_cluster[static_cast<std::size_t>(c.label[static_cast<std::size_t>(arc.node)])] += arc.value;
    for (const Arc& arc : a.in_of(u)) from_cluster[static_cast<std::size_t>(c.label[static_cast<std::size_t>(arc.node)])] += arc.value;
    const std::int64_t self = Obs::degree_corrected ? a.self[static_cast<std::size_t>(u)] : 0;
    const std::int64_t dout = Obs::degree_corrected ? a.out_degree[static_cast<std::size_t>(u)] : 0;
    const std::int64_t din = Obs::degree_corrected ? a.in_degree[static_cast<std::size_t>(u)] : 0;

    const std::int64_t ng = size[static_cast<std::size_t>(g)] - 1;

    // Change of blocks (g, l) and (l, g) once u has left g, for l != g.
    std::vector<double> leave(static_cast<std::size_t>(K), 0.0);
    double leave_total = 0.0;
    for (int l = 0; l < K; ++l) {
        if (l == g) continue;
        const int sl = side[static_cast<std::size_t>(l)];
        const std::int64_t nl = size[static_cast<std::size_t>(l)];
        double d = 0.0;
        const std::int64_t c_gl = cells(sg, sl, ng, nl, false);
        if (c_gl != 0 || f(g, l) != 0.0) d += obs_->block(e(g, l) - to_cluster[static_cast<std::size_t>(l)], c_gl) - f(g, l);
        const std::int64_t c_lg = cells(sl, sg, nl, ng, false);
        if (c_lg != 0 || f(l, g) != 0.0) d += obs_->block(e(l, g) - from_cluster[static_cast<std::size_t>(l)], c_lg) - f(l, g);
        leave[static_cast<std::size_t>(l)] = d;
        leave_total += d;
    }
    const double g_cluster_new =
        obs_->cluster(ng, out_sum_[static_cast<std::size_t>(g)] - dout, in_sum_[static_cast<std::size_t>(g)] - din) -
        cterm_[static_cast<std::size_t>(g)];

    for (std::size_t t = 0; t < targets.size(); ++t) {
        const int h = targets[t];
        const std::int64_t nh = size[static_cast<std::size_t>(h)] + 1;
        double d = leave_total - leave[static_cast<std::size_t>(h)] + g_cluster_new;

        for (int l = 0; l < K; ++l) {
            if (l == g || l == h) continue;
            const int sl = side[static_cast<std::size_t>(l)];
            if (bipartite_ && sl == sg) continue;
            const std::int64_t nl = size[static_cast<std::size_t>(l)];
            const std::int64_t c_hl = cells(sg, sl, nh, nl, false);
            if (c_hl != 0) d += obs_->block(e(h, l) + to_cluster[static_cast<std::size_t>(l)], c_hl) - f(h, l);
            const std::int64_t c_lh = cells(sl, sg, nl, nh, false);
            if (c_lh != 0) d += obs_->block(e(l, h) + from_cluster[static_cast<std::size_t>(l)], c_lh) - f(l, h);
        }

        if (!bipartite_) {
            const auto tg = static_cast<std::size_t>(g);
            const auto th = static_cast<std::size_t>(h);
            d += obs_->block(e(g, g) - to_cluster[tg] - from_cluster[tg] - self, Obs::diagonal_cells(ng)) - f(g, g);
            d += obs_->block(e(h, h) + to_cluster[th] + from_cluster[th] + self, Obs::diagonal_cells(nh)) - f(h, h);
            d += obs_->block(e(g, h) - to_cluster[th] + from_cluster[tg], ng * nh) - f(g, h);
            d += obs_->block(e(h, g) + to_cluster[tg] - from_cluster[th], nh * ng) - f(h, g);
        }

        d += obs_->cluster(nh, out_sum_[static_cast<std::size_t>(h)] + dout, in_sum_[static_cast<std::size_t>(h)] + din) -
             cterm_[static_cast<std::size_t>(h)];
        out[t] = d;
    }
}

template <class Obs>
void BlockStats<Obs>::apply_swap(const Clustering& c, int u, int to) {
    const Arcs& a = *arcs_;
    const int g = c.label[static_cast<std::size_t>(u)];
    for (const Arc& arc : a.out_of(u)) {
        const int l = c.label[static_cast<std::size_t>(arc.node)];
        e_[at(g, l)] -= arc.value;
        e_[at(to, l)] += arc.value;
    }
    for (const Arc& arc : a.in_of(u)) {
        const int l = c.label[static_cast<std::size_t>(arc.node)];
        e_[at(l, g)] -= arc.value;
        e_[at(l, to)] += arc.value;
    }
    if constexpr (Obs::degree_corrected) {
        const std::int64_t s = a.self[static_cast<std::size_t>(u)];
        e_[at(g, g)] -= s;
        e_[at(to, to)] += s;
        out_sum_[static_cast<std::size_t>(g)] -= a.out_degree[static_cast<std::size_t>(u)];
        out_sum_[static_cast<std::size_t>(to)] += a.out_degree[static_cast<std::size_t>(u)];
        in_sum_[static_cast<std::size_t>(g)] -= a.in_degree[static_cast<std::size_t>(u)];
        in_sum_[static_cast<std::size_t>(to)] += a.in_degree[static_cast<std::size_t>(u)];
    }
}

template <class Obs>
double BlockStats<Obs>::merge_cross_term(const Clustering& c, int keep, int drop, int l) const {
    const int sm = c.side[static_cast<std::size_t>(keep)];
    const int sl = c.side[static_cast<std::size_t>(l)];
    if (bipartite_ && sm == sl) return 0.0;
    const std::int64_t nm = c.size[static_cast<std::size_t>(keep)] + c.size[static_cast<std::size_t>(drop)];
    const std::int64_t nl = c.size[static_cast<std::size_t>(l)];
    double d = 0.0;
    const std::int64_t c_ml = cells(sm, sl, nm, nl, false);
    if (c_ml != 0) d += obs_->block(e(keep, l) + e(drop, l), c_ml) - f(keep, l) - f(drop, l);
    const std::int64_t c_lm = cells(sl, sm, nl, nm, false);
    if (c_lm != 0) d += obs_->block(e(l, keep) + e(l, drop), c_lm) - f(l, keep) - f(l, drop);
    return d;
}

template <class Obs>
double BlockStats<Obs>::merge_delta(const Clustering& c, int keep, int drop) const {
    double d = 0.0;
    for (int l = 0; l < c.k(); ++l) {
        if (l != keep && l != drop) d += merge_cross_term(c, keep, drop, l);
    }
    const std::int64_t nm = c.size[static_cast<std::size_t>(keep)] + c.size[static_cast<std::size_t>(drop)];
    if (!bipartite_) {
        d += obs_->block(e(keep, keep) + e(keep, drop) + e(drop, keep) + e(drop, drop), Obs::diagonal_cells(nm)) -
             f(keep, keep) - f(keep, drop) - f(drop, keep) - f(drop, drop);
    }
    d += obs_->cluster(nm, out_sum_[static_cast<std::size_t>(keep)] + out_sum_[static_cast<std::size_t>(drop)],
                       in_sum_[static_cast<std::size_t>(keep)] + in_sum_[static_cast<std::size_t>(drop)]) -
         cterm_[static_cast<std::size_t>(keep)] - cterm_[static_cast<std::size_t>(drop)];
    return d;
}

template <class Obs>
void BlockStats<Obs>::apply_merge(const Clustering& c, int keep, int drop) {
    const int K = c.k();
    for (int l = 0; l < K; ++l) e_[at(keep, l)] += e_[at(drop, l)];
    for (int l = 0; l < K; ++l) e_[at(l, keep)] += e_[at(l, drop)];
    for (int l = 0; l < K; ++l) {
        e_[at(drop, l)] = 0;
        e_[at(l, drop)] = 0;
    }
    out_sum_[static_cast<std::size_t>(keep)] += out_sum_[static_cast<std::size_t>(drop)];
    in_sum_[static_cast<std::size_t>(keep)] += in_sum_[static_cast<std::size_t>(drop)];
    out_sum_[static_cast<std::size_t>(drop)] = 0;
    in_sum_[static_cast<std::size_t>(drop)] = 0;
}

template <class Obs>
void BlockStats<Obs>::refresh(const Clustering& c, int a, int b) {
    const int K = c.k();
    for (int l = 0; l < K; ++l) {
        f_[at(a, l)] = term(c, a, l);
        f_[at(l, a)] = term(c, l, a);
        f_[at(b, l)] = term(c, b, l);
        f_[at(l, b)] = term(c, l, b);
    }
    cterm_[static_cast<std::size_t>(a)] = cluster_term(c, a);
    cterm_[static_cast<std::size_t>(b)] = cluster_term(c, b);
}

template <class Obs>
void BlockStats<Obs>::move_cluster(const Clustering&, int from, int to) {
    if (from != to) {
        // `from` is the last live index, so indices <= from cover every live block.
        for (int l = 0; l <= from; ++l) {
            e_[at(to, l)] = e_[at(from, l)];
            f_[at(to, l)] = f_[at(from, l)];
        }
        for (int l = 0; l <= from; ++l) {
            e_[at(l, to)] = e_[at(l, from)];
            f_[at(l, to)] = f_[at(l, from)];
        }
        out_sum_[static_cast<std::size_t>(to)] = out_sum_[static_cast<std::size_t>(from)];
        in_sum_[static_cast<std::size_t>(to)] = in_sum_[static_cast<std::size_t>(from)];
        cterm_[static_cast<std::size_t>(to)] = cterm_[static_cast<std::size_t>(from)];
    }
    for (int l = 0; l <= from; ++l) {
        e_[at(from, l)] = 0;
        e_[at(l, from)] = 0;
        f_[at(from, l)] = 0.0;
        f_[at(l, from)] = 0.0;
    }
    out_sum_[static_cast<std::size_t>(from)] = 0;
    in_sum_[static_cast<std::size_t>(from)] = 0;
    cterm_[static_cast<std::size_t>(from)] = 0.0;
}

double poisson_constant(const Arcs& a) {
    double s = 0.0;
    for (int u = 0; u < a.nodes; ++u) {
        s += log_gamma(static_cast<double>(a.out_degree[static_cast<std::size_t>(u)]) + 1.0);
        s += log_gamma(static_cast<double>(a.in_degree[static_cast<std::size_t>(u)]) + 1.0);
        s -= log_gamma(static_cast<double>(a.self[static_cast<std::size_t>(u)]) + 1.0);
    }
    for (const Arc& arc : a.out) s -= log_gamma(static_cast<double>(arc.value) + 1.0);
    return s;
}

}  // namespace

std::unique_ptr<const ModelEngine> make_block_engine(const Dataset& ds, ModelKind kind, const ResolvedHyper& hyper) {
    Arcs arcs = build_arcs(ds);
    const std::int64_t max_cells = static_cast<std::int64_t>(ds.n()) * static_cast<std::int64_t>(ds.d());
    switch (kind) {
    case ModelKind::Sbm:
    case ModelKind::LbmBernoulli: {
        BernoulliBlocks obs(hyper, ds.total(), max_cells);
        return std::make_unique<BlockEngine<BernoulliBlocks>>(std::move(arcs), std::move(obs), 0.0);
    }
    case ModelKind::DcSbm:
    case ModelKind::DcLbm: {
        const double constant = poisson_constant(arcs);
        PoissonBlocks obs(hyper, ds.total(), arcs.nodes);
        return std::make_unique<BlockEngine<PoissonBlocks>>(std::move(arcs), std::move(obs), constant);
    }
    case ModelKind::Mom: break;
    }
    throw ModelMismatch("not a block model: " + to_string(kind));
}

}  // namespace iclh
