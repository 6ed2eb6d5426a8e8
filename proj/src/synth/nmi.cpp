#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "iclh/synth.hpp"

namespace iclh {
namespace {

double entropy(const std::map<int, std::int64_t>& counts, double n) {
    double h = 0.0;
    for (const auto& [label, c] : counts) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

}  // namespace

double nmi(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("label vectors differ in length");
    if (a.empty()) return 0.0;
    if (same_set_partition(Partition::from_labels(a), Partition::from_labels(b))) {
        // Identical partitions; the zero-entropy convention still applies.
        std::map<int, std::int64_t> ca;
        for (const int l : a) ++ca[l];
        return ca.size() > 1 ? 1.0 : 0.0;
    }
    std::map<int, std::int64_t> ca, cb;
    std::map<std::pair<int, int>, std::int64_t> joint;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++ca[a[i]];
        ++cb[b[i]];
        ++joint[{a[i], b[i]}];
    }
    const double n = static_cast<double>(a.size());
    const double ha = entropy(ca, n);
    const double hb = entropy(cb, n);
    if (ha <= 0.0 || hb <= 0.0) return 0.0;
    double mi = 0.0;
    for (const auto& [key, c] : joint) {
        const double pij = static_cast<double>(c) / n;
        const double pi = static_cast<double>(ca[key.first]) / n;
        const double pj = static_cast<double>(cb[key.second]) / n;
        mi += pij * std::log(pij / (pi * pj));
    }
    return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

double nmi(const Partition& a, const Partition& b) { return nmi(a.assignment(), b.assignment()); }

}  // namespace iclh
