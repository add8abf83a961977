#include "lutq/partition.hpp"

#include <algorithm>
#include <cmath>

namespace lutq {

bool scheme_uses_vbs(Scheme s) {
    return s == Scheme::uniform_vbs || s == Scheme::range_split_vbs;
}

bool scheme_uses_range_split(Scheme s) {
    return s == Scheme::range_split || s == Scheme::range_split_vbs;
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::uniform: return "U";
        case Scheme::uniform_vbs: return "UVBS";
        case Scheme::range_split: return "RS";
        case Scheme::range_split_vbs: return "RSVBS";
    }
    throw ConfigError("unknown scheme tag");
}

Scheme parse_scheme(const std::string& name) {
    if (name == "U") return Scheme::uniform;
    if (name == "UVBS") return Scheme::uniform_vbs;
    if (name == "RS") return Scheme::range_split;
    if (name == "RSVBS") return Scheme::range_split_vbs;
    throw ConfigError("unknown scheme name: " + name);
}

void QuantizationConfig::validate() const {
    if (code_bits < 2 || magnitude_bits > 16 || code_bits > magnitude_bits) {
        throw ConfigError("require 2 <= code_bits <= magnitude_bits <= 16");
    }
    if (!(p_start > 0.0 && p_start < p_stop && p_stop < 1.0)) {
        throw ConfigError("require 0 < p_start < p_stop < 1");
    }
    if (std::abs(p_start + p_stop - 1.0) > 1e-9) {
        throw ConfigError("asymmetric split not supported: p_stop must equal 1 - p_start");
    }
    if (!(partition_ratio > 0.0)) {
        throw ConfigError("partition ratio must be positive");
    }
    if (max_shift < 0 || max_shift > 16) {
        throw ConfigError("max_shift must lie in [0, 16]");
    }
}

IntervalCounts interval_counts(int code_bits, double ratio) {
    if (code_bits < 2) throw ConfigError("interval_counts requires code_bits >= 2");
    if (!(ratio > 0.0)) throw ConfigError("interval_counts requires positive ratio");
    const int total = 1 << code_bits;
    const int base = static_cast<int>(std::floor(static_cast<double>(total) / (1.0 + ratio)));
    const int correction = (base % 2 != 0) ? 1 : 0;
    IntervalCounts counts;
    counts.external = base + correction;
    counts.internal = total - counts.external;
    if (counts.external < 2 || counts.internal < 2) {
        throw ConfigError("ratio incompatible with code width: needs >= 2 intervals per partition");
    }
    return counts;
}

namespace {

IntervalSet build_uniform(const EmpiricalDistribution& dist, const QuantizationConfig& cfg) {
    const size_t n = cfg.interval_count();
    IntervalSet set;
    set.edges.resize(n + 1);
    set.labels.assign(n, PartitionLabel::internal);
    set.internal_count = static_cast<int>(n);
    set.external_count = 0;
    const double lo = dist.min();
    const double hi = dist.max();
    const double step = (hi - lo) / static_cast<double>(n);
    for (size_t j = 0; j < n; ++j) set.edges[j] = lo + static_cast<double>(j) * step;
    set.edges[n] = hi;
    return set;
}

IntervalSet build_range_split(const EmpiricalDistribution& dist, const QuantizationConfig& cfg,
                              const IntervalCounts& counts) {
    const size_t n = cfg.interval_count();
    const int tail = counts.external / 2;
    const double prob_step = 2.0 * cfg.p_start / static_cast<double>(counts.external);

    IntervalSet set;
    set.edges.resize(n + 1);
    set.labels.resize(n);
    set.external_count = counts.external;
    set.internal_count = counts.internal;

    const double x_start = dist.inv_cdf(cfg.p_start);
    const double x_stop = dist.inv_cdf(cfg.p_stop);

    // Lower tail: probability-uniform edges over mass [0, p_start].
    set.edges[0] = dist.min();
    for (int i = 1; i < tail; ++i) {
        set.edges[i] = dist.inv_cdf(static_cast<double>(i) * prob_step);
    }
    set.edges[tail] = x_start;

    // Internal region: value-uniform edges; shared boundary edges are
    // assigned once so contiguity is exact.
    const double step = (x_stop - x_start) / static_cast<double>(counts.internal);
    for (int j = 1; j < counts.internal; ++j) {
        set.edges[tail + j] = x_start + static_cast<double>(j) * step;
    }
    set.edges[tail + counts.internal] = x_stop;

    // Upper tail mirrors the lower one over mass [p_stop, 1].
    for (int i = 1; i < tail; ++i) {
        const double p = std::min(1.0, cfg.p_stop + static_cast<double>(i) * prob_step);
        set.edges[tail + counts.internal + i] = dist.inv_cdf(p);
    }
    set.edges[n] = dist.max();

    for (size_t i = 0; i < n; ++i) {
        const bool external = i < static_cast<size_t>(tail) || i >= n - static_cast<size_t>(tail);
        set.labels[i] = external ? PartitionLabel::external : PartitionLabel::internal;
    }
    return set;
}

} // namespace

PartitionResult build_intervals(const EmpiricalDistribution& dist, const QuantizationConfig& cfg) {
    cfg.validate();
    PartitionResult result;
    if (dist.degenerate()) {
        result.status = PartitionStatus::degenerate_distribution;
        return result;
    }
    if (!scheme_uses_range_split(cfg.scheme)) {
        result.intervals = build_uniform(dist, cfg);
        return result;
    }
    const IntervalCounts counts = interval_counts(cfg.code_bits, cfg.partition_ratio);
    result.intervals = build_range_split(dist, cfg, counts);
    if (dist.inv_cdf(cfg.p_start) == dist.inv_cdf(cfg.p_stop)) {
        result.status = PartitionStatus::degenerate_span;
    }
    return result;
}

} // namespace lutq
