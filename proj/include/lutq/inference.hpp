#pragma once

#include <span>
#include <vector>

#include "lutq/fixedpoint.hpp"
#include "lutq/model.hpp"

namespace lutq {

// Float-path feedforward pass. Deterministic: extended-precision row
// accumulators, inputs consumed in ascending index order.
std::vector<double> forward_float(const FloatModel& model, std::span<const double> input);

// Batched variant, parallel over inputs; elementwise equal to sequential
// forward_float calls.
std::vector<std::vector<double>> forward_float_batch(const FloatModel& model,
                                                     std::span<const std::vector<double>> inputs);

enum class QuantizedMode {
    dequantized, // decode to reals, then the float path
    integer      // shift-aware integer multiply-accumulate end to end
};

struct IntegerOptions {
    QFormat input_format = q_level_format(8);      // Q1.7
    QFormat activation_format = q_level_format(8); // Q1.7
};

struct ForwardResult {
    std::vector<double> output;
    uint64_t saturation_count = 0; // integer mode: clamped output conversions
};

ForwardResult forward_quantized(const QuantizedModel& model, std::span<const double> input,
                                QuantizedMode mode, const IntegerOptions& options = {});

} // namespace lutq
