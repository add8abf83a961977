#pragma once

#include <span>
#include <vector>

#include "lutq/errors.hpp"

namespace lutq {

// Empirical cumulative distribution of one layer's parameters. The CDF is
// the piecewise-linear interpolant through the order statistics
// (sorted[j], j/(N-1)); duplicate values collapse to vertical jumps, which
// the inverse maps to flat segments.
class EmpiricalDistribution {
public:
    explicit EmpiricalDistribution(std::vector<double> values);

    size_t count() const { return values_.size(); }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

    // True when the distribution carries no spread (N == 1 or min == max).
    // cdf/inv_cdf are unusable then; the codebook builder takes the
    // constant path instead.
    bool degenerate() const;

    double cdf(double x) const;

    // Inverse of the CDF; exact at knot probabilities j/(N-1), leftmost
    // value on flat segments. p must lie in [0, 1].
    double inv_cdf(double p) const;

    std::span<const double> values() const { return values_; }

private:
    std::vector<double> values_; // ascending, duplicates kept
};

} // namespace lutq
