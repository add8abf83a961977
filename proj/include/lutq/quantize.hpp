#pragma once

#include <span>
#include <vector>

#include "lutq/model.hpp"
#include "lutq/partition.hpp"

namespace lutq {

struct LayerQuantReport {
    size_t layer_index = 0;
    Scheme scheme = Scheme::uniform;
    int code_bits = 0;
    int magnitude_bits = 0;
    int external_intervals = 0;
    int internal_intervals = 0;
    int shift = 0;
    size_t distinct_levels = 0;
    uint64_t code_bytes = 0;
    bool degenerate = false;
};

// Quantize every layer: per-layer distribution, codebook, packed codes,
// 8-bit uniform biases. One config applies to all layers, or pass one per
// layer.
QuantizedModel quantize_model(const FloatModel& model, std::span<const QuantizationConfig> configs,
                              std::vector<LayerQuantReport>* reports = nullptr);

QuantizedLayer quantize_layer(const LayerDef& layer, const QuantizationConfig& cfg,
                              LayerQuantReport* report = nullptr);

// Decode codes and biases back into a float model. Running the float
// forward pass on the result is the reference semantics of the quantized
// model.
FloatModel dequantize_model(const QuantizedModel& model);

} // namespace lutq
