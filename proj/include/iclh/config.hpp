#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace iclh {

class Dataset;

enum class ModelKind { Mom, Sbm, DcSbm, LbmBernoulli, DcLbm };

std::string to_string(ModelKind kind);
/// Accepts the CLI spellings: mom, sbm, dcsbm, lbm-bern, dclbm.
ModelKind model_kind_from_string(const std::string& name);

/// Thrown when a model is bound to a dataset it cannot describe.
class ModelMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Prior hyper-parameters of the observation model.
///
/// `beta` is the symmetric Dirichlet parameter of the multinomial mixture
/// and the mean of the exponential block-rate prior of the degree-corrected
/// models. Unset means "pick the default for this model and dataset".
struct ModelHyper {
    std::optional<double> beta;
    double eta0 = 1.0;
    double zeta0 = 1.0;
};

/// Fully resolved hyper-parameters, as used by a model state.
struct ResolvedHyper {
    double beta = 1.0;
    double eta0 = 1.0;
    double zeta0 = 1.0;
};

/// Resolves defaults: beta = 1 for the mixture of multinomials, and the mean
/// count per ordered pair (rows x columns for co-clustering) for the
/// degree-corrected models, falling back to 1 on an all-zero dataset.
ResolvedHyper resolve_hyper(ModelKind kind, const ModelHyper& hyper, const Dataset& ds);

/// Throws ModelMismatch if `kind` cannot be fitted on `ds`.
void check_model_binding(ModelKind kind, const Dataset& ds);

inline constexpr std::uint64_t default_seed = 20210101;
inline constexpr int default_cluster_cap = 512;

struct RunConfig {
    ModelKind model = ModelKind::Sbm;
    double alpha = 1.0;
    ModelHyper hyper;
    int pop_size = 50;
    double mutation_prob = 0.25;
    int max_generations = 10;
    int initial_k = 20;
    std::uint64_t seed = default_seed;
    int threads = 1;
    /// Stop when the best ICL is unchanged for three consecutive generations.
    bool early_stop = false;
    /// Restrict merges/swaps of offspring to clusters sharing a parent.
    bool common_parent_moves = true;
    int cluster_cap = default_cluster_cap;

    /// Throws std::invalid_argument on out-of-domain values.
    void validate() const;
};

}  // namespace iclh
