#include "lutq/fixedpoint.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace lutq {

void QFormat::validate() const {
    if (frac_bits < 1 || frac_bits > total_bits || total_bits > 32) {
        throw ConfigError("invalid Q-format: total_bits=" + std::to_string(total_bits) +
                          " frac_bits=" + std::to_string(frac_bits));
    }
}

int64_t QFormat::raw_min() const {
    return is_signed ? -(int64_t{1} << (total_bits - 1)) : 0;
}

int64_t QFormat::raw_max() const {
    return is_signed ? (int64_t{1} << (total_bits - 1)) - 1 : (int64_t{1} << total_bits) - 1;
}

double QFormat::resolution() const {
    return std::ldexp(1.0, -frac_bits);
}

int64_t round_ties_away(double x) {
    return std::llround(x); // llround rounds halfway cases away from zero
}

FixedValue to_fixed(double x, const QFormat& fmt) {
    fmt.validate();
    if (std::isnan(x)) throw DataError("cannot quantize NaN");
    const double scaled = std::ldexp(x, fmt.frac_bits);
    int64_t raw;
    if (scaled >= static_cast<double>(fmt.raw_max())) {
        raw = fmt.raw_max();
    } else if (scaled <= static_cast<double>(fmt.raw_min())) {
        raw = fmt.raw_min();
    } else {
        raw = round_ties_away(scaled);
        if (raw > fmt.raw_max()) raw = fmt.raw_max();
        if (raw < fmt.raw_min()) raw = fmt.raw_min();
    }
    return FixedValue{raw, fmt};
}

double from_fixed(const FixedValue& v) {
    return std::ldexp(static_cast<double>(v.raw), -v.format.frac_bits);
}

namespace {

constexpr int kCordicFracBits = 40; // internal working resolution
constexpr int kCordicMaxIterations = 48;

struct CordicTables {
    std::array<int64_t, kCordicMaxIterations> atan_units{}; // atan(2^-i) in 2^-40 rad units
    std::array<double, kCordicMaxIterations + 1> inv_gain{};

    CordicTables() {
        double gain = 1.0;
        inv_gain[0] = 1.0;
        for (int i = 0; i < kCordicMaxIterations; ++i) {
            atan_units[i] = round_ties_away(std::ldexp(std::atan(std::ldexp(1.0, -i)), kCordicFracBits));
            gain *= std::sqrt(1.0 + std::ldexp(1.0, -2 * i));
            inv_gain[i + 1] = 1.0 / gain;
        }
    }
};

const CordicTables& cordic_tables() {
    static const CordicTables tables;
    return tables;
}

} // namespace

PolarResult cordic_magnitude_phase(const FixedValue& re, const FixedValue& im, int iterations) {
    if (iterations < 1 || iterations > kCordicMaxIterations) {
        throw ConfigError("CORDIC iterations out of range: " + std::to_string(iterations));
    }
    if (re.raw == 0 && im.raw == 0) return PolarResult{0.0, 0.0};

    const CordicTables& tables = cordic_tables();

    int64_t x = round_ties_away(std::ldexp(from_fixed(re), kCordicFracBits));
    int64_t y = round_ties_away(std::ldexp(from_fixed(im), kCordicFracBits));

    // Pre-rotate into the right half-plane by +-pi/2.
    int quadrant = 0;
    if (x < 0) {
        if (y >= 0) {
            const int64_t t = x;
            x = y;
            y = -t;
            quadrant = 1;
        } else {
            const int64_t t = x;
            x = -y;
            y = t;
            quadrant = -1;
        }
    }

    int64_t angle = 0;
    for (int i = 0; i < iterations; ++i) {
        const int64_t xs = x >> i;
        const int64_t ys = y >> i;
        if (y > 0) {
            x += ys;
            y -= xs;
            angle += tables.atan_units[i];
        } else {
            x -= ys;
            y += xs;
            angle -= tables.atan_units[i];
        }
    }

    PolarResult out;
    out.magnitude = std::ldexp(static_cast<double>(x), -kCordicFracBits) * tables.inv_gain[iterations];
    out.phase = std::ldexp(static_cast<double>(angle), -kCordicFracBits) +
                static_cast<double>(quadrant) * (std::numbers::pi_v<double> / 2.0);
    return out;
}

} // namespace lutq
