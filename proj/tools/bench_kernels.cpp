// Timing harness for the data-parallel kernels: serial reference vs the
// OpenMP variant on the same buffers, with a bitwise equality check.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lutq/kernels.hpp"

using namespace lutq;

namespace {

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_s();
        fn();
        best = std::min(best, now_s() - t0);
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, bool equal) {
    std::printf("%-14s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   %s\n", name,
                serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
                equal ? "bit-equal" : "MISMATCH");
}

std::vector<double> random_values(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
    return v;
}

} // namespace

int main(int argc, char** argv) {
    size_t elements = 1u << 22; // encode / reduction element count
    size_t dim = 1024;          // dense layer edge
    int reps = 5;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        const auto next = [&]() -> const char* {
            if (i + 1 >= argc) {
                std::fprintf(stderr, "missing value for %s\n", arg.c_str());
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--elements") {
            elements = std::strtoull(next(), nullptr, 10);
        } else if (arg == "--dim") {
            dim = std::strtoull(next(), nullptr, 10);
        } else if (arg == "--reps") {
            reps = std::atoi(next());
        } else {
            std::fprintf(stderr, "usage: %s [--elements N] [--dim N] [--reps N]\n", argv[0]);
            return 2;
        }
    }

#ifdef _OPENMP
    std::printf("threads: %d, elements: %zu, dense dim: %zux%zu, reps: %d (best-of)\n",
                omp_get_max_threads(), elements, dim, dim, reps);
#else
    std::printf("built without OpenMP; parallel variants run serially\n");
#endif

    // encode
    {
        const auto values = random_values(elements, 1);
        std::vector<double> edges(17);
        for (int j = 0; j <= 16; ++j) edges[j] = -1.0 + j * 0.125;
        std::vector<uint16_t> a(elements), b(elements);
        const double ts = time_best_of(reps, [&] { kernels::encode_serial(values, edges, a); });
        const double tp = time_best_of(reps, [&] { kernels::encode_parallel(values, edges, b); });
        report("encode", ts, tp, a == b);
    }

    // dense forward
    {
        const auto weights = random_values(dim * dim, 2);
        const auto bias = random_values(dim, 3);
        const auto x = random_values(dim, 4);
        std::vector<double> ya(dim), yb(dim);
        const double ts =
            time_best_of(reps, [&] { kernels::dense_forward_serial(weights, bias, x, ya, true); });
        const double tp =
            time_best_of(reps, [&] { kernels::dense_forward_parallel(weights, bias, x, yb, true); });
        report("dense_forward", ts, tp, ya == yb);
    }

    // integer forward
    {
        std::mt19937_64 rng(5);
        std::vector<uint16_t> codes(dim * dim);
        for (auto& c : codes) c = static_cast<uint16_t>(rng() & 0xF);
        std::vector<int64_t> factor(16);
        for (auto& f : factor) f = static_cast<int64_t>(rng() % 131072) - 65536;
        std::vector<int32_t> x(dim);
        for (auto& v : x) v = static_cast<int32_t>(rng() % 256) - 128;
        std::vector<int64_t> aa(dim), ab(dim);
        const double ts =
            time_best_of(reps, [&] { kernels::int_forward_serial(codes, factor, x, aa, dim); });
        const double tp =
            time_best_of(reps, [&] { kernels::int_forward_parallel(codes, factor, x, ab, dim); });
        report("int_forward", ts, tp, aa == ab);
    }

    // reductions
    {
        const auto a = random_values(elements, 6);
        const auto b = random_values(elements, 7);
        double sa = 0.0, sb = 0.0;
        const double ts = time_best_of(reps, [&] { sa = kernels::sum_serial(a); });
        const double tp = time_best_of(reps, [&] { sb = kernels::sum_parallel(a); });
        report("sum", ts, tp, sa == sb);

        kernels::DiffStats da, db;
        const double ds = time_best_of(reps, [&] { da = kernels::diff_stats_serial(a, b); });
        const double dp = time_best_of(reps, [&] { db = kernels::diff_stats_parallel(a, b); });
        report("diff_stats", ds, dp, da.squared_sum == db.squared_sum && da.max_abs == db.max_abs);
    }

    return 0;
}
