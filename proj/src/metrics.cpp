#include "lutq/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "lutq/errors.hpp"
#include "lutq/inference.hpp"
#include "lutq/kernels.hpp"
#include "lutq/quantize.hpp"

namespace lutq {

namespace {

uint64_t code_payload_bytes(uint64_t weights, int code_bits) {
    return (weights * static_cast<uint64_t>(code_bits) + 7) / 8;
}

constexpr uint64_t kLutRecordBytes = 5; // u16 magnitude + sign + shift + partition

} // namespace

FootprintReport footprint(std::span<const uint32_t> dims, std::span<const int> widths) {
    if (dims.size() < 2) throw ConfigError("architecture needs at least two dimensions");
    const size_t layer_count = dims.size() - 1;
    if (widths.size() != 1 && widths.size() != layer_count) {
        throw ConfigError("width count must be 1 or match the layer count");
    }
    FootprintReport report;
    for (size_t i = 0; i < layer_count; ++i) {
        const int n = widths.size() == 1 ? widths[0] : widths[i];
        if (n < 1 || n > 16) throw ConfigError("code width must lie in [1, 16]");
        LayerFootprint layer;
        layer.in_dim = dims[i];
        layer.out_dim = dims[i + 1];
        layer.code_bits = n;
        const uint64_t weights = static_cast<uint64_t>(layer.in_dim) * layer.out_dim;
        layer.code_bytes = code_payload_bytes(weights, n);
        layer.lut_bytes = kLutRecordBytes << n;
        layer.bias_bytes = layer.out_dim;
        report.total_code_bytes += layer.code_bytes;
        report.total_lut_bytes += layer.lut_bytes;
        report.total_bias_bytes += layer.bias_bytes;
        report.reference_bytes += code_payload_bytes(weights, 8);
        report.layers.push_back(layer);
    }
    return report;
}

ErrorReport quant_error(const FloatModel& model, const QuantizedModel& qmodel,
                        std::span<const std::vector<double>> probes) {
    if (model.layers.size() != qmodel.layers.size()) throw ShapeError("layer count mismatch");
    const FloatModel decoded = dequantize_model(qmodel);

    ErrorReport report;
    double squared = 0.0;
    uint64_t count = 0;
    for (size_t i = 0; i < model.layers.size(); ++i) {
        const auto& a = model.layers[i];
        const auto& b = decoded.layers[i];
        if (a.out_dim != b.out_dim || a.in_dim != b.in_dim) throw ShapeError("layer shape mismatch");
        const auto stats = kernels::diff_stats_parallel(a.weights, b.weights);
        squared += stats.squared_sum;
        count += a.weights.size();
        report.weight_max_abs = std::max(report.weight_max_abs, stats.max_abs);
        report.distinct_levels.push_back(distinct_level_count(qmodel.layers[i].lut));
    }
    report.weight_mse = squared / static_cast<double>(count);

    if (!probes.empty()) {
        const auto ref = forward_float_batch(model, probes);
        const auto got = forward_float_batch(decoded, probes);
        std::vector<double> per_probe(probes.size(), 0.0);
        uint64_t out_count = 0;
        for (size_t p = 0; p < probes.size(); ++p) {
            per_probe[p] = kernels::diff_stats_serial(ref[p], got[p]).squared_sum;
            out_count += ref[p].size();
        }
        report.output_mse = kernels::sum_serial(per_probe) / static_cast<double>(out_count);
    }
    return report;
}

std::vector<SweepRow> scheme_sweep(const FloatModel& model, size_t layer_index,
                                   std::span<const Scheme> schemes,
                                   const QuantizationConfig& swept_cfg,
                                   const QuantizationConfig& other_cfg,
                                   std::span<const std::vector<double>> probes) {
    model.validate();
    if (layer_index >= model.layers.size()) throw ConfigError("layer index out of range");
    if (schemes.empty()) throw ConfigError("no schemes requested");

    std::vector<SweepRow> rows;
    rows.reserve(schemes.size());
    for (Scheme scheme : schemes) {
        std::vector<QuantizationConfig> configs(model.layers.size(), other_cfg);
        configs[layer_index] = swept_cfg;
        configs[layer_index].scheme = scheme;

        const QuantizedModel qmodel = quantize_model(model, configs);
        const ErrorReport err = quant_error(model, qmodel, probes);

        const FloatModel decoded = dequantize_model(qmodel);
        const auto stats = kernels::diff_stats_parallel(model.layers[layer_index].weights,
                                                        decoded.layers[layer_index].weights);

        SweepRow row;
        row.scheme = scheme;
        row.weight_mse = stats.squared_sum /
                         static_cast<double>(model.layers[layer_index].weights.size());
        row.output_mse = err.output_mse;
        row.distinct_levels = err.distinct_levels[layer_index];
        uint64_t bytes = 0;
        for (const auto& qlayer : qmodel.layers) bytes += qlayer.codes.bytes.size();
        row.footprint_bytes = bytes;
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::string out = "scheme,weight_mse,output_error,distinct_levels,footprint_bytes\n";
    char line[160];
    for (const auto& row : rows) {
        std::snprintf(line, sizeof line, "%s,%.12g,%.12g,%zu,%llu\n", scheme_name(row.scheme),
                      row.weight_mse, row.output_mse, row.distinct_levels,
                      static_cast<unsigned long long>(row.footprint_bytes));
        out += line;
    }
    return out;
}

} // namespace lutq
