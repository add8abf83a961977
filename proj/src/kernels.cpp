#include "lutq/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lutq::kernels {

namespace {

constexpr size_t kSumBlock = 4096;

inline uint16_t interval_index(double v, std::span<const double> edges) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    const ptrdiff_t raw = (it - edges.begin()) - 1;
    const ptrdiff_t last = static_cast<ptrdiff_t>(edges.size()) - 2;
    return static_cast<uint16_t>(std::clamp<ptrdiff_t>(raw, 0, last));
}

inline double row_dot(const double* w, const double* x, size_t n, double bias, bool relu) {
    long double acc = 0.0L;
    for (size_t c = 0; c < n; ++c) acc += static_cast<long double>(w[c]) * x[c];
    acc += bias;
    if (relu && acc < 0.0L) acc = 0.0L;
    return static_cast<double>(acc);
}

inline int64_t int_row_dot(const uint16_t* codes, const int64_t* factor, const int32_t* x, size_t n) {
    int64_t acc = 0;
    for (size_t c = 0; c < n; ++c) acc += factor[codes[c]] * x[c];
    return acc;
}

inline double block_partial(const double* v, size_t n) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += v[i];
    return s;
}

} // namespace

void encode_serial(std::span<const double> values, std::span<const double> edges,
                   std::span<uint16_t> codes) {
    for (size_t i = 0; i < values.size(); ++i) codes[i] = interval_index(values[i], edges);
}

void encode_parallel(std::span<const double> values, std::span<const double> edges,
                     std::span<uint16_t> codes) {
    const ptrdiff_t n = static_cast<ptrdiff_t>(values.size());
#pragma omp parallel for schedule(static)
    for (ptrdiff_t i = 0; i < n; ++i) codes[i] = interval_index(values[i], edges);
}

void dense_forward_serial(std::span<const double> weights, std::span<const double> bias,
                          std::span<const double> x, std::span<double> y, bool relu) {
    const size_t in_dim = x.size();
    for (size_t r = 0; r < y.size(); ++r) {
        y[r] = row_dot(weights.data() + r * in_dim, x.data(), in_dim, bias[r], relu);
    }
}

void dense_forward_parallel(std::span<const double> weights, std::span<const double> bias,
                            std::span<const double> x, std::span<double> y, bool relu) {
    const size_t in_dim = x.size();
    const ptrdiff_t rows = static_cast<ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
    for (ptrdiff_t r = 0; r < rows; ++r) {
        y[r] = row_dot(weights.data() + static_cast<size_t>(r) * in_dim, x.data(), in_dim,
                       bias[static_cast<size_t>(r)], relu);
    }
}

void int_forward_serial(std::span<const uint16_t> codes, std::span<const int64_t> factor,
                        std::span<const int32_t> x_raw, std::span<int64_t> acc, size_t in_dim) {
    for (size_t r = 0; r < acc.size(); ++r) {
        acc[r] = int_row_dot(codes.data() + r * in_dim, factor.data(), x_raw.data(), in_dim);
    }
}

void int_forward_parallel(std::span<const uint16_t> codes, std::span<const int64_t> factor,
                          std::span<const int32_t> x_raw, std::span<int64_t> acc, size_t in_dim) {
    const ptrdiff_t rows = static_cast<ptrdiff_t>(acc.size());
#pragma omp parallel for schedule(static)
    for (ptrdiff_t r = 0; r < rows; ++r) {
        acc[r] = int_row_dot(codes.data() + static_cast<size_t>(r) * in_dim, factor.data(),
                             x_raw.data(), in_dim);
    }
}

double sum_serial(std::span<const double> v) {
    const size_t blocks = (v.size() + kSumBlock - 1) / kSumBlock;
    double total = 0.0;
    for (size_t b = 0; b < blocks; ++b) {
        const size_t off = b * kSumBlock;
        total += block_partial(v.data() + off, std::min(kSumBlock, v.size() - off));
    }
    return total;
}

double sum_parallel(std::span<const double> v) {
    const size_t blocks = (v.size() + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(blocks, 0.0);
    const ptrdiff_t nb = static_cast<ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
    for (ptrdiff_t b = 0; b < nb; ++b) {
        const size_t off = static_cast<size_t>(b) * kSumBlock;
        partial[static_cast<size_t>(b)] = block_partial(v.data() + off, std::min(kSumBlock, v.size() - off));
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

namespace {

inline DiffStats diff_block(const double* a, const double* b, size_t n) {
    DiffStats s;
    for (size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s.squared_sum += d * d;
        s.max_abs = std::max(s.max_abs, std::abs(d));
    }
    return s;
}

} // namespace

DiffStats diff_stats_serial(std::span<const double> a, std::span<const double> b) {
    const size_t blocks = (a.size() + kSumBlock - 1) / kSumBlock;
    DiffStats total;
    for (size_t blk = 0; blk < blocks; ++blk) {
        const size_t off = blk * kSumBlock;
        const DiffStats s = diff_block(a.data() + off, b.data() + off, std::min(kSumBlock, a.size() - off));
        total.squared_sum += s.squared_sum;
        total.max_abs = std::max(total.max_abs, s.max_abs);
    }
    return total;
}

DiffStats diff_stats_parallel(std::span<const double> a, std::span<const double> b) {
    const size_t blocks = (a.size() + kSumBlock - 1) / kSumBlock;
    std::vector<DiffStats> partial(blocks);
    const ptrdiff_t nb = static_cast<ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
    for (ptrdiff_t blk = 0; blk < nb; ++blk) {
        const size_t off = static_cast<size_t>(blk) * kSumBlock;
        partial[static_cast<size_t>(blk)] =
            diff_block(a.data() + off, b.data() + off, std::min(kSumBlock, a.size() - off));
    }
    DiffStats total;
    for (const DiffStats& s : partial) {
        total.squared_sum += s.squared_sum;
        total.max_abs = std::max(total.max_abs, s.max_abs);
    }
    return total;
}

} // namespace lutq::kernels
