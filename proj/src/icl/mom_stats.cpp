// Mixture of multinomials with a symmetric Dirichlet(beta) prior per cluster.
//
// Per cluster: log Gamma(beta d) - d log Gamma(beta) + sum_j log Gamma(o_kj + beta)
//              - log Gamma(c_k + beta d)
// which is 0 for an empty cluster, so emptied clusters need no special case.

#include <algorithm>
#include <vector>

#include "icl/model_stats.hpp"

namespace iclh {
namespace {

class MomEngine;

class MomStats final : public ModelStats {
public:
    MomStats(const MomEngine& engine, const Clustering& c);

    std::unique_ptr<ModelStats> clone() const override { return std::make_unique<MomStats>(*this); }
    double log_likelihood(const Clustering& c) const override;
    void swap_deltas(const Clustering& c, int i, std::span<const int> targets, std::span<double> out) const override;
    void apply_swap(const Clustering& c, int i, int to) override;
    double merge_delta(const Clustering& c, int keep, int drop) const override;
    void apply_merge(const Clustering& c, int keep, int drop) override;
    void move_cluster(const Clustering& c, int from, int to) override;

private:
    std::int64_t& o(int k, int j) { return o_[static_cast<std::size_t>(k) * d_ + static_cast<std::size_t>(j)]; }
    std::int64_t o(int k, int j) const { return o_[static_cast<std::size_t>(k) * d_ + static_cast<std::size_t>(j)]; }
    double cluster_term(int k) const;

    const MomEngine* engine_;
    std::size_t d_;
    std::vector<std::int64_t> o_;
    std::vector<std::int64_t> c_;
};

class MomEngine final : public ModelEngine {
public:
    MomEngine(const Dataset& ds, double beta)
        : ds_(&ds),
          beta_(beta),
          d_(ds.d()),
          outcome_(beta, *std::max_element(ds.col_totals().begin(), ds.col_totals().end())),
          total_(beta * ds.d(), ds.total()),
          head_(log_gamma(beta * ds.d())) {
        const auto& rows = ds.out();
        for (int i = 0; i < ds.n(); ++i) {
            constant_ += log_gamma(static_cast<double>(ds.row_totals()[static_cast<std::size_t>(i)]) + 1.0);
            for (auto a = rows.begin(i); a < rows.end(i); ++a) {
                constant_ -= log_gamma(static_cast<double>(rows.value[static_cast<std::size_t>(a)]) + 1.0);
            }
        }
    }

    std::unique_ptr<ModelStats> make_stats(const Clustering& c) const override {
        return std::make_unique<MomStats>(*this, c);
    }
    double data_constant() const override { return constant_; }

    const Dataset* ds_;
    double beta_;
    int d_;
    LogGammaTable outcome_;  // log Gamma(beta + m)
    LogGammaTable total_;    // log Gamma(beta d + m)
    double head_;            // log Gamma(beta d)
    double constant_ = 0.0;
};

MomStats::MomStats(const MomEngine& engine, const Clustering& c)
    : engine_(&engine),
      d_(static_cast<std::size_t>(engine.d_)),
      o_(static_cast<std::size_t>(c.k()) * d_, 0),
      c_(static_cast<std::size_t>(c.k()), 0) {
    const auto& rows = engine.ds_->out();
    for (int i = 0; i < c.elements(); ++i) {
        const int k = c.label[static_cast<std::size_t>(i)];
        for (auto a = rows.begin(i); a < rows.end(i); ++a) {
            o(k, rows.index[static_cast<std::size_t>(a)]) += rows.value[static_cast<std::size_t>(a)];
        }
        c_[static_cast<std::size_t>(k)] += engine.ds_->row_totals()[static_cast<std::size_t>(i)];
    }
}

double MomStats::cluster_term(int k) const {
    const auto& L = engine_->outcome_;
    double s = engine_->head_ - engine_->total_(c_[static_cast<std::size_t>(k)]);
    const double base = L(0);
    for (std::size_t j = 0; j < d_; ++j) {
        const std::int64_t v = o_[static_cast<std::size_t>(k) * d_ + j];
        if (v != 0) s += L(v) - base;
    }
    return s;
}

double MomStats::log_likelihood(const Clustering& c) const {
    double s = 0.0;
    for (int k = 0; k < c.k(); ++k) s += cluster_term(k);
    return s;
}

void MomStats::swap_deltas(const Clustering& c, int i, std::span<const int> targets, std::span<double> out) const {
    const auto& rows = engine_->ds_->out();
    const auto& L = engine_->outcome_;
    const auto& C = engine_->total_;
    const int g = c.label[static_cast<std::size_t>(i)];
    const std::int64_t ci = engine_->ds_->row_totals()[static_cast<std::size_t>(i)];
    const auto lo = rows.begin(i);
    const auto hi = rows.end(i);

    double removal = C(c_[static_cast<std::size_t>(g)]) - C(c_[static_cast<std::size_t>(g)] - ci);
    for (auto a = lo; a < hi; ++a) {
        const std::int64_t x = rows.value[static_cast<std::size_t>(a)];
        const std::int64_t v = o(g, rows.index[static_cast<std::size_t>(a)]);
        removal += L(v - x) - L(v);
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const int h = targets[t];
        double add = C(c_[static_cast<std::size_t>(h)]) - C(c_[static_cast<std::size_t>(h)] + ci);
        for (auto a = lo; a < hi; ++a) {
            const std::int64_t x = rows.value[static_cast<std::size_t>(a)];
            const std::int64_t v = o(h, rows.index[static_cast<std::size_t>(a)]);
            add += L(v + x) - L(v);
        }
        out[t] = removal + add;
    }
}

void MomStats::apply_swap(const Clustering& c, int i, int to) {
    const auto& rows = engine_->ds_->out();
    const int g = c.label[static_cast<std::size_t>(i)];
    for (auto a = rows.begin(i); a < rows.end(i); ++a) {
        const int j = rows.index[static_cast<std::size_t>(a)];
        const std::int64_t x = rows.value[static_cast<std::size_t>(a)];
        o(g, j) -= x;
        o(to, j) += x;
    }
    const std::int64_t ci = engine_->ds_->row_totals()[static_cast<std::size_t>(i)];
    c_[static_cast<std::size_t>(g)] -= ci;
    c_[static_cast<std::size_t>(to)] += ci;
}

double MomStats::merge_delta(const Clustering&, int keep, int drop) const {
    const auto& L = engine_->outcome_;
    const auto& C = engine_->total_;
    const std::int64_t ca = c_[static_cast<std::size_t>(keep)];
    const std::int64_t cb = c_[static_cast<std::size_t>(drop)];
    double s = -engine_->head_ - C(ca + cb) + C(ca) + C(cb);
    const double base = L(0);
    for (std::size_t j = 0; j < d_; ++j) {
        const std::int64_t va = o_[static_cast<std::size_t>(keep) * d_ + j];
        const std::int64_t vb = o_[static_cast<std::size_t>(drop) * d_ + j];
        if (va != 0 && vb != 0) s += L(va + vb) - L(va) - L(vb) + base;
    }
    return s;
}

void MomStats::apply_merge(const Clustering&, int keep, int drop) {
    for (std::size_t j = 0; j < d_; ++j) {
        o_[static_cast<std::size_t>(keep) * d_ + j] += o_[static_cast<std::size_t>(drop) * d_ + j];
        o_[static_cast<std::size_t>(drop) * d_ + j] = 0;
    }
    c_[static_cast<std::size_t>(keep)] += c_[static_cast<std::size_t>(drop)];
    c_[static_cast<std::size_t>(drop)] = 0;
}

void MomStats::move_cluster(const Clustering&, int from, int to) {
    std::copy_n(o_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(from) * d_), d_,
                o_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(to) * d_));
    c_[static_cast<std::size_t>(to)] = c_[static_cast<std::size_t>(from)];
    o_.resize(static_cast<std::size_t>(from) * d_);
    c_.resize(static_cast<std::size_t>(from));
}

}  // namespace

std::unique_ptr<const ModelEngine> make_mom_engine(const Dataset& ds, const ResolvedHyper& hyper) {
    return std::make_unique<MomEngine>(ds, hyper.beta);
}

}  // namespace iclh
