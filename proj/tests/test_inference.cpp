#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lutq/inference.hpp"
#include "lutq/quantize.hpp"
#include "lutq/synthetic.hpp"
#include "test_util.hpp"

using namespace lutq;

TEST_CASE("float forward pass on hand-checked layers") {
    SUBCASE("identity weights with relu clamp") {
        const FloatModel model = testutil::tiny_model(2, 2, {1.0, 0.0, 0.0, 1.0}, {0.0, 0.0});
        const std::vector<double> in = {0.3, -0.2};
        const auto out = forward_float(model, in);
        CHECK(out[0] == 0.3);
        CHECK(out[1] == 0.0);
    }
    SUBCASE("worked matrix example") {
        const FloatModel model = testutil::tiny_model(2, 2, {0.5, 0.25, -0.5, 0.5}, {0.1, -0.1});
        const std::vector<double> in = {0.4, 0.8};
        const auto out = forward_float(model, in);
        CHECK(out[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(out[1] == doctest::Approx(0.1).epsilon(1e-15));
    }
    SUBCASE("zero input and bias gives zero output") {
        const FloatModel model = testutil::tiny_model(2, 2, {0.5, 0.25, -0.5, 0.5}, {0.0, 0.0});
        const std::vector<double> in = {0.0, 0.0};
        const auto out = forward_float(model, in);
        CHECK(out[0] == 0.0);
        CHECK(out[1] == 0.0);
    }
    SUBCASE("shape mismatch") {
        const FloatModel model = testutil::tiny_model(2, 2, {0.5, 0.25, -0.5, 0.5}, {0.0, 0.0});
        const std::vector<double> in = {0.0};
        CHECK_THROWS_AS(forward_float(model, in), ShapeError);
    }
}

TEST_CASE("dequantized mode equals the float pass over the decoded model, bitwise") {
    const uint32_t dims_arr[3] = {24, 16, 8};
    const FloatModel model = make_synthetic_model(dims_arr, 0.15, 1.0, 42);
    const QuantizedModel qmodel =
        quantize_model(model, std::vector<QuantizationConfig>{QuantizationConfig{}});
    const FloatModel decoded = dequantize_model(qmodel);

    const auto probes = make_probe_inputs(32, 24, 7);
    for (const auto& probe : probes) {
        const auto expect = forward_float(decoded, probe);
        const auto got = forward_quantized(qmodel, probe, QuantizedMode::dequantized);
        REQUIRE(got.output.size() == expect.size());
        for (size_t i = 0; i < expect.size(); ++i) {
            CHECK(got.output[i] == expect[i]); // exact, same arithmetic
        }
        CHECK(got.saturation_count == 0);
    }
}

TEST_CASE("a model whose weights sit on codebook levels reproduces the float pass") {
    // Weights already on the Q1.7 grid stay put under 8-bit uniform
    // quantization of a uniform-ish tensor.
    std::vector<double> weights;
    for (int i = 0; i < 16; ++i) weights.push_back((i - 8) / 16.0);
    FloatModel model = testutil::tiny_model(4, 4, std::move(weights), {0.0, 0.125, -0.25, 0.5});

    QuantizationConfig cfg;
    cfg.code_bits = 8;
    cfg.magnitude_bits = 8;
    cfg.scheme = Scheme::uniform;
    const QuantizedModel qmodel = quantize_model(model, std::vector<QuantizationConfig>{cfg});

    const auto probes = make_probe_inputs(16, 4, 9);
    for (const auto& probe : probes) {
        const auto expect = forward_float(model, probe);
        const auto got = forward_quantized(qmodel, probe, QuantizedMode::dequantized);
        for (size_t i = 0; i < expect.size(); ++i) CHECK(got.output[i] == expect[i]);
    }
}

TEST_CASE("integer mode tracks dequantized mode within the rounding budget") {
    std::mt19937_64 seeds(123);
    for (int trial = 0; trial < 8; ++trial) {
        const uint32_t dims_arr[2] = {16, 16};
        const FloatModel model = make_synthetic_model(dims_arr, 0.05, 1.0, seeds());
        const QuantizedModel qmodel =
            quantize_model(model, std::vector<QuantizationConfig>{QuantizationConfig{}});

        const auto probes = make_probe_inputs(16, 16, seeds());
        for (const auto& probe : probes) {
            // Scale probes down so pre-activations stay inside Q1.7.
            std::vector<double> scaled(probe.size());
            for (size_t i = 0; i < probe.size(); ++i) scaled[i] = probe[i] * 0.25;

            const auto deq = forward_quantized(qmodel, scaled, QuantizedMode::dequantized);
            const auto integer = forward_quantized(qmodel, scaled, QuantizedMode::integer);
            CHECK(integer.saturation_count == 0);
            const double bound = 16.0 * std::ldexp(1.0, -7); // in_dim * 2^-(m-1)
            for (size_t i = 0; i < deq.output.size(); ++i) {
                CHECK(std::abs(integer.output[i] - deq.output[i]) <= bound);
            }
        }
    }
}

TEST_CASE("all-zero magnitudes leave only the bias path") {
    const FloatModel model =
        testutil::tiny_model(2, 2, {0.0, 0.0, 0.0, 0.0}, {0.25, -0.25});
    const QuantizedModel qmodel =
        quantize_model(model, std::vector<QuantizationConfig>{QuantizationConfig{}});
    const std::vector<double> in = {0.7, -0.7};

    const auto deq = forward_quantized(qmodel, in, QuantizedMode::dequantized);
    CHECK(deq.output[0] == 0.25);
    CHECK(deq.output[1] == 0.0); // relu of -0.25

    const auto integer = forward_quantized(qmodel, in, QuantizedMode::integer);
    CHECK(integer.output[0] == 0.25);
    CHECK(integer.output[1] == 0.0);
}

TEST_CASE("integer mode reports saturation instead of wrapping") {
    // Large positive weights and inputs overflow Q1.7 pre-activations.
    const FloatModel model = testutil::tiny_model(
        1, 8, std::vector<double>(8, 0.9921875), std::vector<double>(1, 0.5));
    QuantizationConfig cfg;
    cfg.scheme = Scheme::uniform;
    const QuantizedModel qmodel = quantize_model(model, std::vector<QuantizationConfig>{cfg});
    const std::vector<double> in(8, 0.9);
    const auto integer = forward_quantized(qmodel, in, QuantizedMode::integer);
    CHECK(integer.saturation_count == 1);
    CHECK(integer.output[0] == 0.9921875); // Q1.7 max, exact
}

TEST_CASE("batched forward equals sequential forward") {
    const uint32_t dims_arr[3] = {12, 10, 6};
    const FloatModel model = make_synthetic_model(dims_arr, 0.2, 1.0, 77);
    const auto probes = make_probe_inputs(64, 12, 78);
    const auto batch = forward_float_batch(model, probes);
    REQUIRE(batch.size() == probes.size());
    for (size_t p = 0; p < probes.size(); ++p) {
        const auto single = forward_float(model, probes[p]);
        CHECK(batch[p] == single);
    }
}
