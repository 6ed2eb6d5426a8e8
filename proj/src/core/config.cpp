#include "iclh/config.hpp"

#include <cmath>

#include "iclh/dataset.hpp"

namespace iclh {

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::Mom: return "mom";
    case ModelKind::Sbm: return "sbm";
    case ModelKind::DcSbm: return "dcsbm";
    case ModelKind::LbmBernoulli: return "lbm-bern";
    case ModelKind::DcLbm: return "dclbm";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "mom") return ModelKind::Mom;
    if (name == "sbm") return ModelKind::Sbm;
    if (name == "dcsbm") return ModelKind::DcSbm;
    if (name == "lbm-bern") return ModelKind::LbmBernoulli;
    if (name == "dclbm") return ModelKind::DcLbm;
    throw std::invalid_argument("unknown model '" + name + "'");
}

void check_model_binding(ModelKind kind, const Dataset& ds) {
    switch (kind) {
    case ModelKind::Mom:
        if (ds.kind() != DatasetKind::CountMatrix) {
            throw ModelMismatch("mom needs a count matrix, got " + to_string(ds.kind()));
        }
        return;
    case ModelKind::Sbm:
    case ModelKind::DcSbm:
        if (!ds.is_graph()) throw ModelMismatch(to_string(kind) + " needs a graph, got " + to_string(ds.kind()));
        if (kind == ModelKind::Sbm && !ds.is_binary()) {
            throw DataError("sbm needs a binary adjacency; found an entry of " + std::to_string(ds.max_entry()));
        }
        return;
    case ModelKind::LbmBernoulli:
    case ModelKind::DcLbm:
        if (!ds.is_bipartite()) {
            throw ModelMismatch(to_string(kind) + " needs a bipartite matrix, got " + to_string(ds.kind()));
        }
        if (kind == ModelKind::LbmBernoulli && !ds.is_binary()) {
            throw DataError("lbm-bern needs a binary matrix; found an entry of " + std::to_string(ds.max_entry()));
        }
        return;
    }
}

ResolvedHyper resolve_hyper(ModelKind kind, const ModelHyper& hyper, const Dataset& ds) {
    ResolvedHyper out;
    out.eta0 = hyper.eta0;
    out.zeta0 = hyper.zeta0;
    if (hyper.beta) {
        out.beta = *hyper.beta;
    } else if (kind == ModelKind::DcSbm || kind == ModelKind::DcLbm) {
        const double cells = static_cast<double>(ds.n()) * static_cast<double>(ds.d());
        out.beta = ds.total() > 0 ? static_cast<double>(ds.total()) / cells : 1.0;
    } else {
        out.beta = 1.0;
    }
    if (!(out.beta > 0.0) || !std::isfinite(out.beta)) throw std::invalid_argument("beta must be positive");
    if (!(out.eta0 > 0.0) || !(out.zeta0 > 0.0)) throw std::invalid_argument("eta0 and zeta0 must be positive");
    return out;
}

void RunConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) throw std::invalid_argument("mutation_prob must be in [0,1]");
    if (pop_size < 2) throw std::invalid_argument("pop_size must be at least 2");
    if (max_generations < 1) throw std::invalid_argument("max_generations must be positive");
    if (initial_k < 1) throw std::invalid_argument("initial_k must be positive");
    if (threads < 1) throw std::invalid_argument("threads must be positive");
    if (cluster_cap < 1) throw std::invalid_argument("cluster_cap must be positive");
    if (hyper.beta && !(*hyper.beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (!(hyper.eta0 > 0.0) || !(hyper.zeta0 > 0.0)) throw std::invalid_argument("eta0 and zeta0 must be positive");
}

}  // namespace iclh
