#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "icl/model_stats.hpp"
#include "iclh/icl.hpp"

namespace iclh {
namespace {

Clustering make_clustering(const Partition& p) {
    Clustering c;
    c.label = p.assignment();
    c.boundary = p.row_count();
    c.size.assign(static_cast<std::size_t>(p.k()), 0);
    c.side.assign(static_cast<std::size_t>(p.k()), -1);
    for (int i = 0; i < p.size(); ++i) {
        const auto k = static_cast<std::size_t>(c.label[static_cast<std::size_t>(i)]);
        ++c.size[k];
        if (c.side[k] < 0) c.side[k] = c.element_side(i);
    }
    for (std::size_t k = 0; k < c.size.size(); ++k) {
        ++c.side_k[c.side[k]];
        c.side_n[c.side[k]] += c.size[k];
    }
    return c;
}

/// Change of the side-level prior terms when a side loses one cluster:
/// log Gamma(K'a) - K' log Gamma(a) - log Gamma(n + K'a) minus the same at K.
double cluster_count_shift(int k, std::int64_t n, double alpha) {
    const double kb = static_cast<double>(k);
    const double ka = kb - 1.0;
    const double nd = static_cast<double>(n);
    return log_gamma(ka * alpha) - log_gamma(kb * alpha) + log_gamma(alpha) - log_gamma(nd + ka * alpha) +
           log_gamma(nd + kb * alpha);
}

}  // namespace

std::shared_ptr<const ModelContext> ModelContext::create(std::shared_ptr<const Dataset> ds, ModelKind kind,
                                                         const ResolvedHyper& hyper, double alpha,
                                                         bool include_data_constant, int cluster_cap) {
    if (!ds) throw std::invalid_argument("null dataset");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("alpha must be positive");
    check_model_binding(kind, *ds);
    std::shared_ptr<ModelContext> ctx(new ModelContext());
    ctx->dataset_ = std::move(ds);
    ctx->kind_ = kind;
    ctx->hyper_ = hyper;
    ctx->alpha_ = alpha;
    ctx->include_constant_ = include_data_constant;
    ctx->cluster_cap_ = cluster_cap;
    ctx->engine_ = kind == ModelKind::Mom ? make_mom_engine(*ctx->dataset_, hyper)
                                          : make_block_engine(*ctx->dataset_, kind, hyper);
    ctx->alpha_table_ = LogGammaTable(alpha, ctx->dataset_->element_count());
    ctx->data_constant_ = ctx->engine_->data_constant();
    return ctx;
}

ModelContext::~ModelContext() = default;

IclState::IclState(std::shared_ptr<const ModelContext> ctx, const Partition& p) : ctx_(std::move(ctx)) {
    if (!validate_partition(p, ctx_->dataset())) throw std::invalid_argument("partition is not valid for the dataset");
    clustering_ = make_clustering(p);
    stats_ = ctx_->engine().make_stats(clustering_);
}

IclState::IclState(std::shared_ptr<const Dataset> ds, const Partition& p, ModelKind kind, const ModelHyper& hyper,
                   double alpha, bool include_data_constant)
    : IclState(ModelContext::create(ds, kind, resolve_hyper(kind, hyper, *ds), alpha, include_data_constant), p) {}

IclState::IclState(const IclState& other)
    : ctx_(other.ctx_), clustering_(other.clustering_), stats_(other.stats_->clone()) {}

IclState& IclState::operator=(const IclState& other) {
    if (this != &other) {
        ctx_ = other.ctx_;
        clustering_ = other.clustering_;
        stats_ = other.stats_->clone();
    }
    return *this;
}

IclState::IclState(IclState&&) noexcept = default;
IclState& IclState::operator=(IclState&&) noexcept = default;
IclState::~IclState() = default;

double IclState::log_p_x() const {
    const double v = stats_->log_likelihood(clustering_);
    return ctx_->include_data_constant() ? v + ctx_->data_constant() : v;
}

double IclState::log_p_z() const {
    const double alpha = ctx_->alpha();
    const auto& T = ctx_->alpha_table();
    double s = 0.0;
    for (int side = 0; side < 2; ++side) {
        const int k = clustering_.side_k[side];
        if (k == 0) continue;
        const double kd = static_cast<double>(k);
        s += log_gamma(kd * alpha) - kd * log_gamma(alpha) -
             log_gamma(static_cast<double>(clustering_.side_n[side]) + kd * alpha);
    }
    for (const std::int64_t m : clustering_.size) s += T(m);
    return s;
}

IclValue IclState::icl() const {
    IclValue v;
    v.log_p_x_given_z = log_p_x();
    v.log_p_z_given_alpha = log_p_z();
    v.total = v.log_p_x_given_z + v.log_p_z_given_alpha;
    v.includes_data_constant = ctx_->include_data_constant();
    return v;
}

std::optional<double> IclState::delta_swap(int i, int to) const {
    const int g = cluster_of(i);
    if (to < 0 || to >= k()) throw std::out_of_range("target cluster out of range");
    if (to == g) return 0.0;
    if (clustering_.side[static_cast<std::size_t>(to)] != clustering_.element_side(i)) return std::nullopt;
    double out = 0.0;
    swap_deltas(i, std::span<const int>(&to, 1), std::span<double>(&out, 1));
    return out;
}

void IclState::swap_deltas(int i, std::span<const int> targets, std::span<double> out) const {
    stats_->swap_deltas(clustering_, i, targets, out);
    const auto& T = ctx_->alpha_table();
    const int g = cluster_of(i);
    const std::int64_t ng = clustering_.size[static_cast<std::size_t>(g)];
    double removal = T(ng - 1) - T(ng);
    if (ng == 1) {
        const int side = clustering_.side[static_cast<std::size_t>(g)];
        // The emptied cluster's factor Gamma(alpha + 0) leaves with it.
        removal = -T(1) + cluster_count_shift(clustering_.side_k[side], clustering_.side_n[side], ctx_->alpha());
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const std::int64_t nh = clustering_.size[static_cast<std::size_t>(targets[t])];
        out[t] += removal + T(nh + 1) - T(nh);
    }
}

double IclState::merge_data_delta(int g, int h) const {
    return stats_->merge_delta(clustering_, std::min(g, h), std::max(g, h));
}

double IclState::merge_cross_term(int g, int h, int l) const {
    return stats_->merge_cross_term(clustering_, std::min(g, h), std::max(g, h), l);
}

double IclState::merge_prior_delta(int g, int h) const {
    const auto& T = ctx_->alpha_table();
    const int side = clustering_.side[static_cast<std::size_t>(g)];
    const std::int64_t ng = clustering_.size[static_cast<std::size_t>(g)];
    const std::int64_t nh = clustering_.size[static_cast<std::size_t>(h)];
    return cluster_count_shift(clustering_.side_k[side], clustering_.side_n[side], ctx_->alpha()) + T(ng + nh) -
           T(ng) - T(nh);
}

std::optional<double> IclState::delta_merge(int g, int h) const {
    if (g == h) throw std::invalid_argument("cannot merge a cluster with itself");
    if (clustering_.side[static_cast<std::size_t>(g)] != clustering_.side[static_cast<std::size_t>(h)]) {
        return std::nullopt;
    }
    return merge_data_delta(g, h) + merge_prior_delta(g, h);
}

ClusterRemoval IclState::apply_swap(int i, int to) {
    const int g = cluster_of(i);
    if (to == g) return {};
    if (clustering_.side[static_cast<std::size_t>(to)] != clustering_.element_side(i)) {
        throw std::invalid_argument("swap across bipartition sides");
    }
    stats_->apply_swap(clustering_, i, to);
    clustering_.label[static_cast<std::size_t>(i)] = to;
    --clustering_.size[static_cast<std::size_t>(g)];
    ++clustering_.size[static_cast<std::size_t>(to)];
    stats_->refresh(clustering_, g, to);
    if (clustering_.size[static_cast<std::size_t>(g)] == 0) return remove_cluster(g);
    return {};
}

MergeOutcome IclState::apply_merge(int g, int h) {
    if (g == h) throw std::invalid_argument("cannot merge a cluster with itself");
    if (clustering_.side[static_cast<std::size_t>(g)] != clustering_.side[static_cast<std::size_t>(h)]) {
        throw std::invalid_argument("merge across bipartition sides");
    }
    const int keep = std::min(g, h);
    const int drop = std::max(g, h);
    stats_->apply_merge(clustering_, keep, drop);
    for (auto& l : clustering_.label) {
        if (l == drop) l = keep;
    }
    clustering_.size[static_cast<std::size_t>(keep)] += clustering_.size[static_cast<std::size_t>(drop)];
    clustering_.size[static_cast<std::size_t>(drop)] = 0;
    stats_->refresh(clustering_, keep, drop);
    return {keep, remove_cluster(drop)};
}

ClusterRemoval IclState::remove_cluster(int r) {
    const int last = k() - 1;
    const int side = clustering_.side[static_cast<std::size_t>(r)];
    --clustering_.side_k[side];
    if (r != last) {
        for (auto& l : clustering_.label) {
            if (l == last) l = r;
        }
        clustering_.size[static_cast<std::size_t>(r)] = clustering_.size[static_cast<std::size_t>(last)];
        clustering_.side[static_cast<std::size_t>(r)] = clustering_.side[static_cast<std::size_t>(last)];
    }
    clustering_.size.pop_back();
    clustering_.side.pop_back();
    stats_->move_cluster(clustering_, last, r);
    return {r, last};
}

double IclState::intercept() const {
    double s = log_p_x();
    std::int64_t n[2] = {0, 0};
    int kk[2] = {0, 0};
    for (int k = 0; k < this->k(); ++k) {
        const int side = clustering_.side[static_cast<std::size_t>(k)];
        const std::int64_t m = clustering_.size[static_cast<std::size_t>(k)];
        s += log_gamma(static_cast<double>(m));
        n[side] += m;
        ++kk[side];
    }
    for (int side = 0; side < 2; ++side) {
        if (kk[side] == 0) continue;
        s -= std::log(static_cast<double>(kk[side])) + log_gamma(static_cast<double>(n[side]));
    }
    return s;
}

double IclState::intercept_merge_delta(int g, int h) const {
    if (g == h) throw std::invalid_argument("cannot merge a cluster with itself");
    const int side = clustering_.side[static_cast<std::size_t>(g)];
    if (side != clustering_.side[static_cast<std::size_t>(h)]) {
        throw std::invalid_argument("merge across bipartition sides");
    }
    const double kd = static_cast<double>(clustering_.side_k[side]);
    const double ng = static_cast<double>(clustering_.size[static_cast<std::size_t>(g)]);
    const double nh = static_cast<double>(clustering_.size[static_cast<std::size_t>(h)]);
    return merge_data_delta(g, h) + std::log(kd) - std::log(kd - 1.0) + log_gamma(ng + nh) - log_gamma(ng) -
           log_gamma(nh);
}

Partition IclState::partition() const {
    return Partition::from_labels(clustering_.label, clustering_.boundary);
}

namespace {

double checked_log_p_x(const IclState& s, ModelKind kind) {
    if (s.context().kind() != kind) {
        throw ModelMismatch("state is bound to " + to_string(s.context().kind()) + ", not " + to_string(kind));
    }
    return s.log_p_x();
}

}  // namespace

double log_p_x_mom(const IclState& s) { return checked_log_p_x(s, ModelKind::Mom); }
double log_p_x_sbm(const IclState& s) { return checked_log_p_x(s, ModelKind::Sbm); }
double log_p_x_dcsbm(const IclState& s) { return checked_log_p_x(s, ModelKind::DcSbm); }
double log_p_x_dclbm(const IclState& s) { return checked_log_p_x(s, ModelKind::DcLbm); }
double log_p_x_lbm_bernoulli(const IclState& s) { return checked_log_p_x(s, ModelKind::LbmBernoulli); }

IclValue icl(const Partition& p, std::shared_ptr<const Dataset> ds, const RunConfig& config,
             bool include_data_constant) {
    if (!ds) throw std::invalid_argument("null dataset");
    check_model_binding(config.model, *ds);
    auto ctx = ModelContext::create(ds, config.model, resolve_hyper(config.model, config.hyper, *ds), config.alpha,
                                    include_data_constant, config.cluster_cap);
    return IclState(ctx, p).icl();
}

}  // namespace iclh
