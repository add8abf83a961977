#pragma once

#include <cstdint>

#include "lutq/errors.hpp"

namespace lutq {

// Fixed-point format descriptor. A signed format with total_bits = m and
// frac_bits = m-1 is the classic Q1.(m-1): one sign/integer bit, resolution
// 2^-(m-1), representable range [-1, 1 - 2^-(m-1)].
struct QFormat {
    int total_bits = 8;
    int frac_bits = 7;
    bool is_signed = true;

    void validate() const;
    int64_t raw_min() const;
    int64_t raw_max() const;
    double resolution() const; // 2^-frac_bits

    bool operator==(const QFormat&) const = default;
};

inline QFormat q_signed(int total_bits, int frac_bits) { return QFormat{total_bits, frac_bits, true}; }

// Q1.(m-1): the m-bit signed format used for quantization levels.
inline QFormat q_level_format(int magnitude_bits) { return q_signed(magnitude_bits, magnitude_bits - 1); }

struct FixedValue {
    int64_t raw = 0;
    QFormat format;
};

// Round-to-nearest, ties away from zero, saturating to the format range.
FixedValue to_fixed(double x, const QFormat& fmt);

// Exact: raw * 2^-frac_bits.
double from_fixed(const FixedValue& v);

// Shared rounding helper: round(x) with halfway cases away from zero.
int64_t round_ties_away(double x);

struct PolarResult {
    double magnitude = 0.0;
    double phase = 0.0; // radians, in (-pi, pi]
};

// Vectoring-mode CORDIC on the dequantized inputs. The iteration loop is
// integer shift-add only; the final magnitude is rescaled by the reciprocal
// of the CORDIC gain for the given iteration count.
PolarResult cordic_magnitude_phase(const FixedValue& re, const FixedValue& im, int iterations = 16);

} // namespace lutq
