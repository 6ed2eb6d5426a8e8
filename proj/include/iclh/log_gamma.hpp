#pragma once

#include <cstdint>
#include <vector>

namespace iclh {

/// Reentrant log|Gamma(x)|.
double log_gamma(double x);

/// log Gamma(offset + m) for integer m >= 0, tabulated up to a size limit and
/// evaluated directly beyond it. Immutable once built.
class LogGammaTable {
public:
    LogGammaTable() = default;
    LogGammaTable(double offset, std::int64_t max_arg);

    double operator()(std::int64_t m) const {
        return m < static_cast<std::int64_t>(values_.size()) ? values_[static_cast<std::size_t>(m)]
                                                              : log_gamma(offset_ + static_cast<double>(m));
    }
    double offset() const { return offset_; }

    static constexpr std::int64_t max_table = std::int64_t{1} << 21;

private:
    double offset_ = 0.0;
    std::vector<double> values_;
};

}  // namespace iclh
