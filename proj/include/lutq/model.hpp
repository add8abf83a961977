#pragma once

#include <cstdint>
#include <vector>

#include "lutq/codebook.hpp"
#include "lutq/codec.hpp"

namespace lutq {

enum class Activation : uint8_t { none = 0, relu = 1 };

struct LayerDef {
    uint32_t out_dim = 0;
    uint32_t in_dim = 0;
    Activation activation = Activation::relu;
    std::vector<double> weights; // row-major, one row per output neuron
    std::vector<double> bias;

    size_t weight_count() const { return static_cast<size_t>(out_dim) * in_dim; }
};

struct FloatModel {
    std::vector<LayerDef> layers;
    uint64_t clamped_on_load = 0;

    void validate() const; // throws on structural or value violations
};

struct QuantizedLayer {
    uint32_t out_dim = 0;
    uint32_t in_dim = 0;
    Activation activation = Activation::relu;
    Codebook lut;
    CodeStream codes;              // out_dim * in_dim packed weight codes
    std::vector<int8_t> bias_raw;  // 8-bit uniform, Q1.7

    size_t weight_count() const { return static_cast<size_t>(out_dim) * in_dim; }
};

struct QuantizedModel {
    std::vector<QuantizedLayer> layers;

    void validate() const;
};

} // namespace lutq
