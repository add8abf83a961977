#pragma once

#include <cstdint>
#include <span>

namespace lutq::kernels {

// Data-parallel inner loops, each as an OpenMP variant plus a serial
// reference. Both variants of a kernel perform identical arithmetic in an
// identical order per element, so results are bit-equal regardless of
// thread count; the tests assert that and the bench tool compares speed.

// Interval membership: codes[i] = index of the interval holding values[i],
// half-open on shared edges, last interval closed, out-of-range clamped.
void encode_serial(std::span<const double> values, std::span<const double> edges,
                   std::span<uint16_t> codes);
void encode_parallel(std::span<const double> values, std::span<const double> edges,
                     std::span<uint16_t> codes);

// Dense layer: y[r] = act(sum_c w[r*in+c] * x[c] + bias[r]), accumulated in
// extended precision, column index ascending.
void dense_forward_serial(std::span<const double> weights, std::span<const double> bias,
                          std::span<const double> x, std::span<double> y, bool relu);
void dense_forward_parallel(std::span<const double> weights, std::span<const double> bias,
                            std::span<const double> x, std::span<double> y, bool relu);

// Integer layer accumulation: acc[r] = sum_c factor[codes[r*in+c]] * x_raw[c].
// factor[] carries sign, magnitude and shift alignment for each code.
void int_forward_serial(std::span<const uint16_t> codes, std::span<const int64_t> factor,
                        std::span<const int32_t> x_raw, std::span<int64_t> acc, size_t in_dim);
void int_forward_parallel(std::span<const uint16_t> codes, std::span<const int64_t> factor,
                          std::span<const int32_t> x_raw, std::span<int64_t> acc, size_t in_dim);

// Blocked summation with a fixed block size; the block partials are reduced
// in block order, which pins the floating-point result for any thread count.
double sum_serial(std::span<const double> v);
double sum_parallel(std::span<const double> v);

struct DiffStats {
    double squared_sum = 0.0;
    double max_abs = 0.0;
};

// Elementwise difference statistics between two equal-length arrays, with
// the same blocked reduction as sum_*.
DiffStats diff_stats_serial(std::span<const double> a, std::span<const double> b);
DiffStats diff_stats_parallel(std::span<const double> a, std::span<const double> b);

} // namespace lutq::kernels
