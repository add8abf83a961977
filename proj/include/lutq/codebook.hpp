#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lutq/distribution.hpp"
#include "lutq/fixedpoint.hpp"
#include "lutq/partition.hpp"

namespace lutq {

// One LUT record. The reconstructed value is sign * magnitude * 2^-(m+shift)
// with m the codebook's magnitude width; `value` caches it. Entries without
// a shift hold plain Q1.(m-1) levels (magnitude even, shift 0).
struct LutEntry {
    uint16_t magnitude = 0;
    int8_t sign = 1; // +1 or -1
    uint8_t shift = 0;
    PartitionLabel partition = PartitionLabel::internal;
    double value = 0.0;
};

struct Codebook {
    Scheme scheme = Scheme::uniform;
    int code_bits = 4;
    int magnitude_bits = 8;
    int shift = 0;          // shared per-layer shift applied to internal entries
    bool degenerate = false;
    std::vector<LutEntry> entries;        // 2^n, indexed by code, value-ascending
    std::optional<IntervalSet> intervals; // absent on container load

    size_t size() const { return entries.size(); }
};

// Exact arithmetic mean of the members of one interval; midpoint when empty.
double interval_mean(std::span<const double> members, double lower, double upper);

// Mean quantized to the given fixed-point format.
double interval_level(std::span<const double> members, double lower, double upper, const QFormat& fmt);

// Largest k with max|level| < 2^-k (strict), capped at max_shift. An
// all-zero level list saturates at the cap.
int select_shift(std::span<const double> levels, int max_shift);

struct VbsMagnitude {
    uint16_t magnitude = 0;
    int8_t sign = 1;
};

// Magnitude word for a level under a k-bit virtual shift: the low m bits of
// the (m+k)-fractional-bit representation of |level|, i.e.
// round(|level| * 2^(m+k)). Requires |level| < 2^-shift.
VbsMagnitude apply_vbs(double level, int shift, int magnitude_bits);

double lut_value(uint16_t magnitude, int8_t sign, int shift, int magnitude_bits);

Codebook build_codebook(const EmpiricalDistribution& dist, const QuantizationConfig& cfg);

size_t distinct_level_count(const Codebook& cb);

} // namespace lutq
