#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lutq/distribution.hpp"
#include "lutq/errors.hpp"

namespace lutq {

enum class Scheme : uint8_t {
    uniform = 0,        // U:     equal-width intervals, plain m-bit levels
    uniform_vbs = 1,    // UVBS:  equal-width intervals, shared shift on all entries
    range_split = 2,    // RS:    dense center / sparse tails, plain m-bit levels
    range_split_vbs = 3 // RSVBS: range split with shift on internal entries
};

bool scheme_uses_vbs(Scheme s);
bool scheme_uses_range_split(Scheme s);
const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name); // "U", "UVBS", "RS", "RSVBS"

struct QuantizationConfig {
    int code_bits = 4;            // n
    int magnitude_bits = 8;       // m
    double partition_ratio = 1.0; // internal/external interval count ratio
    double p_start = 0.04;
    double p_stop = 0.96;         // must equal 1 - p_start
    Scheme scheme = Scheme::range_split_vbs;
    int max_shift = 8;            // cap on the virtual bit shift

    size_t interval_count() const { return size_t{1} << code_bits; }
    void validate() const;
};

enum class PartitionLabel : uint8_t { internal = 0, external = 1 };

struct IntervalCounts {
    int external = 0;
    int internal = 0;
};

// Number of external/internal intervals for an n-bit code under the given
// ratio. The external count is forced even by adding one when the floor
// term is odd, so both tails get the same number of intervals.
IntervalCounts interval_counts(int code_bits, double ratio);

// 2^n contiguous intervals over [min, max]. Half-open [lower, upper),
// except the last interval which is closed.
struct IntervalSet {
    std::vector<double> edges;           // 2^n + 1, non-decreasing
    std::vector<PartitionLabel> labels;  // per interval
    int external_count = 0;
    int internal_count = 0;

    size_t size() const { return labels.size(); }
    double lower(size_t i) const { return edges[i]; }
    double upper(size_t i) const { return edges[i + 1]; }
    double width(size_t i) const { return edges[i + 1] - edges[i]; }
};

enum class PartitionStatus {
    ok,
    degenerate_distribution, // no spread at all: constant-codebook path
    degenerate_span          // zero-width internal region, intervals still usable
};

struct PartitionResult {
    PartitionStatus status = PartitionStatus::ok;
    IntervalSet intervals;
};

// Interval construction. Uniform schemes split [min, max] into 2^n equal
// widths, all internal. Range-split schemes put probability-uniform
// intervals on each tail (mass [0, p_start] and [p_stop, 1]) and
// value-uniform intervals between the tail quantiles.
PartitionResult build_intervals(const EmpiricalDistribution& dist, const QuantizationConfig& cfg);

} // namespace lutq
