#pragma once

#include <vector>

#include "iclh/dataset.hpp"
#include "iclh/partition.hpp"
#include "iclh/rng.hpp"

namespace iclh {

/// Graph with super_k groups of sub_per_super communities each. A pair is
/// linked with p_sub inside a community, p_super across communities of the
/// same group and p_out otherwise.
struct HierSbmSpec {
    int n = 1500;
    int super_k = 3;
    int sub_per_super = 5;
    double p_sub = 0.1;
    double p_super = 0.025;
    double p_out = 0.001;
    bool directed = true;

    void validate() const;
};

struct HierSbmSample {
    Dataset data;
    std::vector<int> sub_labels;
    std::vector<int> super_labels;
};

/// Communities are contiguous blocks of near-equal size. No self-loops.
HierSbmSample gen_hier_sbm(const HierSbmSpec& spec, Rng& rng);

/// Count vectors from k clusters of equal expected size. Every cluster is
/// uniform over d outcomes except `boosted` random ones whose probability
/// is multiplied by boost_factor before renormalising.
struct MomSpec {
    int n = 500;
    int k = 15;
    int d = 100;
    int boosted = 10;
    double boost_factor = 4.0;
    int draws = 50;

    void validate() const;
};

struct MomSample {
    Dataset data;
    std::vector<int> labels;
    /// Outcome probabilities of each cluster.
    std::vector<std::vector<double>> profiles;
};

MomSample gen_mom(const MomSpec& spec, Rng& rng);

/// Mutual information normalised by sqrt(H(a) H(b)); 0 when either
/// partition has a single cluster. Throws std::invalid_argument on a size mismatch.
double nmi(const std::vector<int>& a, const std::vector<int>& b);
double nmi(const Partition& a, const Partition& b);

}  // namespace iclh
