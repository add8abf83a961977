#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "lutq/codec.hpp"
#include "lutq/metrics.hpp"
#include "lutq/quantize.hpp"
#include "lutq/synthetic.hpp"
#include "test_util.hpp"

using namespace lutq;

namespace {

const uint32_t kArch[3] = {1032, 256, 129};

} // namespace

TEST_CASE("footprint reproduces the byte accounting") {
    SUBCASE("8-bit everywhere") {
        const int widths[2] = {8, 8};
        const FootprintReport r = footprint(kArch, widths);
        CHECK(r.total_code_bytes == 297216);
        CHECK(r.reference_bytes == 297216);
        CHECK(r.reduction() == 0.0);
    }
    SUBCASE("4-bit everywhere halves the codes") {
        const int widths[2] = {4, 4};
        const FootprintReport r = footprint(kArch, widths);
        CHECK(r.total_code_bytes == 148608);
        CHECK(r.reduction() == 0.5);
    }
    SUBCASE("mixed widths") {
        const int widths[2] = {4, 8};
        const FootprintReport r = footprint(kArch, widths);
        CHECK(r.total_code_bytes == 165120);
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.1f", 100.0 * r.reduction());
        CHECK(std::string(buf) == "44.4");
    }
    SUBCASE("per-layer split") {
        const int widths[2] = {4, 8};
        const FootprintReport r = footprint(kArch, widths);
        REQUIRE(r.layers.size() == 2);
        CHECK(r.layers[0].code_bytes == 132096);
        CHECK(r.layers[1].code_bytes == 33024);
        CHECK(r.layers[0].bias_bytes == 256);
        CHECK(r.layers[1].bias_bytes == 129);
    }
    SUBCASE("halving the width exactly halves the bytes") {
        // Layers with even weight counts, so no pad byte blurs the ratio.
        const uint32_t arch[4] = {8, 33, 12, 6};
        const int w4[1] = {4};
        const int w8[1] = {8};
        CHECK(footprint(arch, w4).total_code_bytes * 2 == footprint(arch, w8).total_code_bytes);
    }
}

TEST_CASE("quant_error on models that quantize exactly") {
    // Weights on the Q1.7 grid at 8-bit uniform: zero weight error.
    std::vector<double> weights;
    for (int i = 0; i < 16; ++i) weights.push_back((i - 8) / 16.0);
    const FloatModel model = testutil::tiny_model(4, 4, std::move(weights), {0.0, 0.0, 0.0, 0.0});
    QuantizationConfig cfg;
    cfg.code_bits = 8;
    cfg.scheme = Scheme::uniform;
    const QuantizedModel qmodel = quantize_model(model, std::vector<QuantizationConfig>{cfg});

    const auto probes = make_probe_inputs(8, 4, 2);
    const ErrorReport report = quant_error(model, qmodel, probes);
    CHECK(report.weight_mse == 0.0);
    CHECK(report.weight_max_abs == 0.0);
    CHECK(report.output_mse == 0.0);
}

TEST_CASE("constant layers quantize exactly through the degenerate path") {
    const FloatModel model =
        testutil::tiny_model(2, 2, std::vector<double>(4, 0.25), {0.0, 0.0});
    const QuantizedModel qmodel =
        quantize_model(model, std::vector<QuantizationConfig>{QuantizationConfig{}});
    const ErrorReport report = quant_error(model, qmodel, {});
    CHECK(report.weight_mse == 0.0);
    CHECK(report.distinct_levels[0] == 1);
}

TEST_CASE("range split with shift beats plain range split on weight error") {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        const auto samples = sample_clamped_normal(20000, 0.1, 1.0, seed);
        EmpiricalDistribution dist(samples);

        QuantizationConfig cfg;
        cfg.scheme = Scheme::range_split;
        const Codebook rs = build_codebook(dist, cfg);
        cfg.scheme = Scheme::range_split_vbs;
        const Codebook rsvbs = build_codebook(dist, cfg);

        double mse_rs = 0.0;
        double mse_rsvbs = 0.0;
        const auto rs_vals = decode_codes(encode_params(samples, *rs.intervals), rs);
        const auto vbs_vals = decode_codes(encode_params(samples, *rsvbs.intervals), rsvbs);
        for (size_t i = 0; i < samples.size(); ++i) {
            mse_rs += (samples[i] - rs_vals[i]) * (samples[i] - rs_vals[i]);
            mse_rsvbs += (samples[i] - vbs_vals[i]) * (samples[i] - vbs_vals[i]);
        }
        CHECK(mse_rsvbs <= mse_rs); // intervals identical, levels only refined
    }
}

TEST_CASE("at sample scale the range split beats uniform even at equal widths") {
    // Same container (n=4 codes over m=8 values) for both schemes; at 100k
    // samples the data range outgrows the dense region and the split wins.
    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto samples = sample_clamped_normal(100000, 0.1, 1.0, seed);
        EmpiricalDistribution dist(samples);
        const auto mse = [&](Scheme scheme) {
            QuantizationConfig cfg;
            cfg.scheme = scheme;
            const Codebook cb = build_codebook(dist, cfg);
            const auto decoded = decode_codes(encode_params(samples, *cb.intervals), cb);
            long double acc = 0.0L;
            for (size_t i = 0; i < samples.size(); ++i) {
                acc += static_cast<long double>(samples[i] - decoded[i]) * (samples[i] - decoded[i]);
            }
            return static_cast<double>(acc / samples.size());
        };
        CHECK(mse(Scheme::range_split_vbs) < mse(Scheme::uniform));
    }
}

TEST_CASE("scheme sweep emits one deterministic row per scheme") {
    // Layer weights with a narrow center and stretched tails: the range
    // split collides at 8-bit level resolution unless the shift is applied.
    const FloatModel model =
        testutil::tiny_model(25, 40, testutil::narrow_center_values(1000),
                             std::vector<double>(25, 0.0));
    const auto probes = make_probe_inputs(64, 40, 12);

    const Scheme schemes[4] = {Scheme::uniform, Scheme::uniform_vbs, Scheme::range_split,
                               Scheme::range_split_vbs};
    QuantizationConfig swept; // 4-bit range-split defaults
    QuantizationConfig other;
    other.code_bits = 8;
    other.scheme = Scheme::uniform;

    const auto rows = scheme_sweep(model, 0, schemes, swept, other, probes);
    REQUIRE(rows.size() == 4);
    for (size_t i = 0; i < 4; ++i) CHECK(rows[i].scheme == schemes[i]);

    CHECK(rows[2].distinct_levels < 16);
    CHECK(rows[3].distinct_levels == 16);
    CHECK(rows[3].weight_mse < rows[2].weight_mse);

    const auto again = scheme_sweep(model, 0, schemes, swept, other, probes);
    CHECK(sweep_csv(rows) == sweep_csv(again));

    const std::string csv = sweep_csv(rows);
    CHECK(csv.rfind("scheme,weight_mse,output_error,distinct_levels,footprint_bytes\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("sweep protocol holds the other layer fixed") {
    const uint32_t dims_arr[3] = {16, 12, 8};
    const FloatModel model = make_synthetic_model(dims_arr, 0.1, 1.0, 13);
    const Scheme schemes[1] = {Scheme::uniform};
    QuantizationConfig swept;
    swept.code_bits = 4;
    QuantizationConfig other;
    other.code_bits = 8;
    other.scheme = Scheme::uniform;

    const auto rows = scheme_sweep(model, 1, schemes, swept, other, {});
    // Swept layer at 4 bits, other at 8: 16*12*8/8 + 12*8*4/8 bytes.
    CHECK(rows[0].footprint_bytes == 16 * 12 + 12 * 8 / 2);
}
