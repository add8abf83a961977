#include "lutq/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lutq {

double interval_mean(std::span<const double> members, double lower, double upper) {
    if (members.empty()) return (lower + upper) / 2.0;
    long double acc = 0.0L;
    for (double v : members) acc += v;
    return static_cast<double>(acc / static_cast<long double>(members.size()));
}

double interval_level(std::span<const double> members, double lower, double upper, const QFormat& fmt) {
    return from_fixed(to_fixed(interval_mean(members, lower, upper), fmt));
}

int select_shift(std::span<const double> levels, int max_shift) {
    if (levels.empty()) throw ConfigError("select_shift requires at least one level");
    double max_abs = 0.0;
    for (double v : levels) {
        max_abs = std::max(max_abs, std::abs(v));
    }
    if (max_abs >= 1.0) throw ConfigError("select_shift requires |level| < 1");
    int k = 0;
    while (k < max_shift && max_abs < std::ldexp(1.0, -(k + 1))) ++k;
    return k;
}

VbsMagnitude apply_vbs(double level, int shift, int magnitude_bits) {
    if (shift < 0) throw ConfigError("negative shift");
    if (std::abs(level) >= std::ldexp(1.0, -shift)) {
        throw ConfigError("level magnitude " + std::to_string(level) +
                          " violates shift bound 2^-" + std::to_string(shift));
    }
    VbsMagnitude out;
    out.sign = level < 0.0 ? -1 : 1;
    int64_t u = round_ties_away(std::ldexp(std::abs(level), magnitude_bits + shift));
    const int64_t limit = int64_t{1} << magnitude_bits;
    if (u >= limit) u = limit - 1; // rounding at the bound edge
    out.magnitude = static_cast<uint16_t>(u);
    return out;
}

double lut_value(uint16_t magnitude, int8_t sign, int shift, int magnitude_bits) {
    return static_cast<double>(sign) * std::ldexp(static_cast<double>(magnitude), -(magnitude_bits + shift));
}

namespace {

LutEntry make_entry(double source, int shift, PartitionLabel label, int magnitude_bits) {
    // The magnitude word tops out at 2^m - 1, so a level sitting exactly on
    // the shift bound (only +-1.0 with shift 0 in practice) saturates to the
    // largest representable value.
    if (std::abs(source) >= std::ldexp(1.0, -shift)) {
        const double largest = static_cast<double>((int64_t{1} << magnitude_bits) - 1);
        source = std::copysign(std::ldexp(largest, -(magnitude_bits + shift)), source);
    }
    const VbsMagnitude vm = apply_vbs(source, shift, magnitude_bits);
    LutEntry e;
    e.magnitude = vm.magnitude;
    e.sign = vm.sign;
    e.shift = static_cast<uint8_t>(shift);
    e.partition = label;
    e.value = lut_value(vm.magnitude, vm.sign, shift, magnitude_bits);
    return e;
}

Codebook build_constant(const EmpiricalDistribution& dist, const QuantizationConfig& cfg) {
    const size_t n = cfg.interval_count();
    const double constant = dist.min();
    const double level = from_fixed(to_fixed(constant, q_level_format(cfg.magnitude_bits)));

    int k = 0;
    if (scheme_uses_vbs(cfg.scheme) && std::abs(level) < 1.0) {
        const int cap = std::min(cfg.max_shift, cfg.magnitude_bits);
        k = select_shift(std::span<const double>{&level, 1}, cap);
    }

    Codebook cb;
    cb.scheme = cfg.scheme;
    cb.code_bits = cfg.code_bits;
    cb.magnitude_bits = cfg.magnitude_bits;
    cb.shift = k;
    cb.degenerate = true;
    cb.entries.assign(n, make_entry(k > 0 ? constant : level, k, PartitionLabel::internal, cfg.magnitude_bits));

    IntervalSet set;
    set.edges.assign(n + 1, constant);
    set.labels.assign(n, PartitionLabel::internal);
    set.internal_count = static_cast<int>(n);
    cb.intervals = std::move(set);
    return cb;
}

} // namespace

Codebook build_codebook(const EmpiricalDistribution& dist, const QuantizationConfig& cfg) {
    cfg.validate();
    PartitionResult part = build_intervals(dist, cfg);
    if (part.status == PartitionStatus::degenerate_distribution) {
        return build_constant(dist, cfg);
    }

    const IntervalSet& set = part.intervals;
    const size_t n = set.size();
    const QFormat level_fmt = q_level_format(cfg.magnitude_bits);
    const auto values = dist.values();

    // Member slices per interval: half-open on shared edges, last closed.
    std::vector<size_t> offsets(n + 1);
    for (size_t j = 0; j < n; ++j) {
        offsets[j] = static_cast<size_t>(
            std::lower_bound(values.begin(), values.end(), set.edges[j]) - values.begin());
    }
    offsets[n] = values.size();

    std::vector<double> means(n);
    std::vector<double> levels(n);
    for (size_t i = 0; i < n; ++i) {
        const auto members = values.subspan(offsets[i], offsets[i + 1] - offsets[i]);
        means[i] = interval_mean(members, set.lower(i), set.upper(i));
        levels[i] = from_fixed(to_fixed(means[i], level_fmt));
    }

    // Shared per-layer shift from the m-bit internal levels. The cap also
    // honors m so that means near the shift bound stay below it.
    int k = 0;
    if (scheme_uses_vbs(cfg.scheme)) {
        std::vector<double> internal_levels;
        internal_levels.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            if (set.labels[i] == PartitionLabel::internal) internal_levels.push_back(levels[i]);
        }
        const int cap = std::min(cfg.max_shift, cfg.magnitude_bits);
        k = select_shift(internal_levels, cap);
    }

    Codebook cb;
    cb.scheme = cfg.scheme;
    cb.code_bits = cfg.code_bits;
    cb.magnitude_bits = cfg.magnitude_bits;
    cb.shift = k;
    cb.entries.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        const int entry_shift = (k > 0 && set.labels[i] == PartitionLabel::internal) ? k : 0;
        // Shifted entries re-quantize the exact mean at m+k fractional
        // bits; unshifted ones store the m-bit level as-is.
        const double source = entry_shift > 0 ? means[i] : levels[i];
        cb.entries.push_back(make_entry(source, entry_shift, set.labels[i], cfg.magnitude_bits));
    }
    cb.intervals = std::move(part.intervals);
    return cb;
}

size_t distinct_level_count(const Codebook& cb) {
    std::vector<double> vals;
    vals.reserve(cb.entries.size());
    for (const auto& e : cb.entries) vals.push_back(e.value);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals.size();
}

} // namespace lutq
