#include "iclh/log_gamma.hpp"

#include <algorithm>
#include <cmath>

namespace iclh {

double log_gamma(double x) {
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

LogGammaTable::LogGammaTable(double offset, std::int64_t max_arg) : offset_(offset) {
    const std::int64_t size = std::clamp<std::int64_t>(max_arg + 1, 1, max_table);
    values_.resize(static_cast<std::size_t>(size));
    for (std::int64_t m = 0; m < size; ++m) values_[static_cast<std::size_t>(m)] = log_gamma(offset + static_cast<double>(m));
}

}  // namespace iclh
