#include "lutq/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lutq/codec.hpp"
#include "lutq/errors.hpp"
#include "lutq/kernels.hpp"
#include "lutq/quantize.hpp"

namespace lutq {

namespace {

void check_input(size_t expected, size_t got) {
    if (expected != got) {
        throw ShapeError("input length " + std::to_string(got) + " does not match in_dim " +
                         std::to_string(expected));
    }
}

// round(v / 2^s) with ties away from zero; negative s shifts left.
int64_t round_shift(int64_t v, int s) {
    if (s <= 0) return v << (-s);
    const int64_t half = int64_t{1} << (s - 1);
    if (v >= 0) return (v + half) >> s;
    return -((-v + half) >> s);
}

} // namespace

std::vector<double> forward_float(const FloatModel& model, std::span<const double> input) {
    if (model.layers.empty()) throw ShapeError("model holds no layers");
    check_input(model.layers.front().in_dim, input.size());
    for (double v : input) {
        if (!std::isfinite(v)) throw DataError("non-finite input value");
    }

    std::vector<double> current(input.begin(), input.end());
    std::vector<double> next;
    for (const auto& layer : model.layers) {
        check_input(layer.in_dim, current.size());
        next.assign(layer.out_dim, 0.0);
        kernels::dense_forward_parallel(layer.weights, layer.bias, current, next,
                                        layer.activation == Activation::relu);
        current.swap(next);
    }
    return current;
}

std::vector<std::vector<double>> forward_float_batch(const FloatModel& model,
                                                     std::span<const std::vector<double>> inputs) {
    std::vector<std::vector<double>> outputs(inputs.size());
    const ptrdiff_t n = static_cast<ptrdiff_t>(inputs.size());
#pragma omp parallel for schedule(static)
    for (ptrdiff_t i = 0; i < n; ++i) {
        outputs[static_cast<size_t>(i)] = forward_float(model, inputs[static_cast<size_t>(i)]);
    }
    return outputs;
}

namespace {

ForwardResult forward_integer(const QuantizedModel& model, std::span<const double> input,
                              const IntegerOptions& options) {
    options.input_format.validate();
    options.activation_format.validate();
    // Keeps every product below 2^48 so the 64-bit accumulator has headroom
    // for fan-in up to 2^15 without wrapping.
    if (options.input_format.total_bits > 16 || options.activation_format.total_bits > 16) {
        throw ConfigError("integer mode supports activation formats up to 16 bits");
    }

    ForwardResult result;

    // Quantize the input once; later layers consume raw activations.
    std::vector<int32_t> current(input.size());
    for (size_t i = 0; i < input.size(); ++i) {
        current[i] = static_cast<int32_t>(to_fixed(input[i], options.input_format).raw);
    }
    int in_frac = options.input_format.frac_bits;

    std::vector<int32_t> next;
    std::vector<int64_t> acc;
    for (size_t li = 0; li < model.layers.size(); ++li) {
        const QuantizedLayer& layer = model.layers[li];
        check_input(layer.in_dim, current.size());
        const int m = layer.lut.magnitude_bits;

        // Align all entries to the largest shift in the layer so one integer
        // accumulator scale covers internal and external codes.
        int align = 0;
        for (const auto& e : layer.lut.entries) align = std::max<int>(align, e.shift);
        std::vector<int64_t> factor(layer.lut.entries.size());
        for (size_t c = 0; c < factor.size(); ++c) {
            const auto& e = layer.lut.entries[c];
            factor[c] = static_cast<int64_t>(e.sign) * static_cast<int64_t>(e.magnitude)
                        << (align - e.shift);
        }

        const auto codes = unpack_codes(layer.codes);
        acc.assign(layer.out_dim, 0);
        kernels::int_forward_parallel(codes, factor, current, acc, layer.in_dim);

        // Accumulator scale is 2^-(m + align + in_frac); biases are Q1.7.
        const int acc_frac = m + align + in_frac;
        const bool relu = layer.activation == Activation::relu;
        const QFormat& out_fmt = options.activation_format;
        next.assign(layer.out_dim, 0);
        for (size_t r = 0; r < layer.out_dim; ++r) {
            const int64_t bias_aligned = round_shift(layer.bias_raw[r], 7 - acc_frac);
            const int64_t total = acc[r] + bias_aligned;
            int64_t raw = round_shift(total, acc_frac - out_fmt.frac_bits);
            if (raw > out_fmt.raw_max()) {
                raw = out_fmt.raw_max();
                ++result.saturation_count;
            } else if (raw < out_fmt.raw_min()) {
                raw = out_fmt.raw_min();
                ++result.saturation_count;
            }
            if (relu && raw < 0) raw = 0;
            next[r] = static_cast<int32_t>(raw);
        }
        current.swap(next);
        in_frac = out_fmt.frac_bits;
    }

    result.output.resize(current.size());
    for (size_t i = 0; i < current.size(); ++i) {
        result.output[i] = std::ldexp(static_cast<double>(current[i]), -in_frac);
    }
    return result;
}

} // namespace

ForwardResult forward_quantized(const QuantizedModel& model, std::span<const double> input,
                                QuantizedMode mode, const IntegerOptions& options) {
    if (model.layers.empty()) throw ShapeError("model holds no layers");
    check_input(model.layers.front().in_dim, input.size());

    if (mode == QuantizedMode::dequantized) {
        ForwardResult result;
        result.output = forward_float(dequantize_model(model), input);
        return result;
    }
    return forward_integer(model, input, options);
}

} // namespace lutq
