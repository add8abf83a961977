#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lutq/model.hpp"
#include "lutq/partition.hpp"

namespace lutq {

struct LayerFootprint {
    uint32_t out_dim = 0;
    uint32_t in_dim = 0;
    int code_bits = 0;
    uint64_t code_bytes = 0; // packed weight codes, external memory
    uint64_t lut_bytes = 0;  // serialized LUT records, FPGA-resident
    uint64_t bias_bytes = 0;
};

struct FootprintReport {
    std::vector<LayerFootprint> layers;
    uint64_t total_code_bytes = 0;
    uint64_t total_lut_bytes = 0;
    uint64_t total_bias_bytes = 0;
    uint64_t reference_bytes = 0; // same dims with 8-bit codes

    // Headline reduction versus the 8-bit reference; counts weight codes
    // only, LUT and biases are reported separately.
    double reduction() const {
        return 1.0 - static_cast<double>(total_code_bytes) / static_cast<double>(reference_bytes);
    }
};

// dims is the architecture chain (d0, d1, ..., dL); widths holds the code
// width per layer, or a single width for all layers.
FootprintReport footprint(std::span<const uint32_t> dims, std::span<const int> widths);

struct ErrorReport {
    double weight_mse = 0.0;
    double weight_max_abs = 0.0;
    double output_mse = 0.0; // mean squared output difference over probes
    std::vector<size_t> distinct_levels; // per layer
};

ErrorReport quant_error(const FloatModel& model, const QuantizedModel& qmodel,
                        std::span<const std::vector<double>> probes);

struct SweepRow {
    Scheme scheme = Scheme::uniform;
    double weight_mse = 0.0;   // swept layer only
    double output_mse = 0.0;   // whole model
    size_t distinct_levels = 0; // swept layer codebook
    uint64_t footprint_bytes = 0; // whole model code bytes
};

// Quantizes the model once per scheme with the swept layer at swept_cfg and
// every other layer at other_cfg, and evaluates the errors on the probes.
std::vector<SweepRow> scheme_sweep(const FloatModel& model, size_t layer_index,
                                   std::span<const Scheme> schemes,
                                   const QuantizationConfig& swept_cfg,
                                   const QuantizationConfig& other_cfg,
                                   std::span<const std::vector<double>> probes);

// CSV with the frozen header
// scheme,weight_mse,output_error,distinct_levels,footprint_bytes
std::string sweep_csv(std::span<const SweepRow> rows);

} // namespace lutq
