#include <cmath>
#include <stdexcept>
#include <vector>

#include "iclh/icl.hpp"

namespace iclh {

double log_p_z_sizes(std::span<const std::int64_t> sizes, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
    if (sizes.empty()) return 0.0;
    const double k = static_cast<double>(sizes.size());
    std::int64_t n = 0;
    double s = log_gamma(k * alpha) - k * log_gamma(alpha);
    for (const std::int64_t m : sizes) {
        s += log_gamma(alpha + static_cast<double>(m));
        n += m;
    }
    return s - log_gamma(static_cast<double>(n) + k * alpha);
}

double log_p_z(const Partition& p, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
    const auto sizes = p.cluster_sizes();
    std::vector<std::int64_t> side_sizes[2];
    std::vector<int> side(sizes.size(), -1);
    for (int i = 0; i < p.size(); ++i) {
        const int k = p[static_cast<std::size_t>(i)];
        if (k >= 0 && k < p.k() && side[static_cast<std::size_t>(k)] < 0) {
            side[static_cast<std::size_t>(k)] = i < p.row_count() ? 0 : 1;
        }
    }
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (sizes[k] > 0) side_sizes[side[k]].push_back(sizes[k]);
    }
    return log_p_z_sizes(side_sizes[0], alpha) + log_p_z_sizes(side_sizes[1], alpha);
}

}  // namespace iclh
