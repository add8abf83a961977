#include "lutq/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace lutq {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DataError("empirical distribution requires at least one value");
    for (double v : values_) {
        if (!std::isfinite(v)) throw DataError("non-finite value in parameter tensor");
    }
    std::sort(values_.begin(), values_.end());
}

bool EmpiricalDistribution::degenerate() const {
    return values_.size() < 2 || values_.front() == values_.back();
}

double EmpiricalDistribution::cdf(double x) const {
    if (degenerate()) throw DataError("cdf of a degenerate distribution is undefined");
    if (x <= values_.front()) return 0.0;
    if (x >= values_.back()) return 1.0;
    const double denom = static_cast<double>(values_.size() - 1);
    // j: first knot strictly above x, i: last knot at or below it. With
    // duplicates this picks the segment between the runs, i.e. the upper
    // envelope of the knot path.
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    const size_t j = static_cast<size_t>(it - values_.begin());
    const size_t i = j - 1;
    if (values_[i] == x) return static_cast<double>(i) / denom;
    const double t = (x - values_[i]) / (values_[j] - values_[i]);
    const double pi = static_cast<double>(i) / denom;
    const double pj = static_cast<double>(j) / denom;
    return pi + t * (pj - pi);
}

double EmpiricalDistribution::inv_cdf(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("inv_cdf probability outside [0, 1]");
    if (degenerate()) throw DataError("inv_cdf of a degenerate distribution is undefined");
    const size_t n = values_.size();
    const double denom = static_cast<double>(n - 1);
    const auto knot_p = [denom](size_t j) { return static_cast<double>(j) / denom; };

    // Largest knot index with probability <= p. Evaluating knot
    // probabilities on the fly keeps knot hits bit-exact for callers that
    // compute j/(N-1) the same way.
    size_t lo = 0;
    size_t hi = n - 1;
    while (lo < hi) {
        const size_t mid = (lo + hi + 1) / 2;
        if (knot_p(mid) <= p) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if (lo == n - 1 || knot_p(lo) == p) return values_[lo];
    const double pl = knot_p(lo);
    const double pr = knot_p(lo + 1);
    const double t = (p - pl) / (pr - pl);
    return values_[lo] + t * (values_[lo + 1] - values_[lo]);
}

} // namespace lutq
