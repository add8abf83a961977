#include "lutq/quantize.hpp"

#include <string>

#include "lutq/codec.hpp"
#include "lutq/errors.hpp"
#include "lutq/fixedpoint.hpp"

namespace lutq {

QuantizedLayer quantize_layer(const LayerDef& layer, const QuantizationConfig& cfg,
                              LayerQuantReport* report) {
    cfg.validate();
    EmpiricalDistribution dist(std::vector<double>(layer.weights.begin(), layer.weights.end()));

    QuantizedLayer out;
    out.out_dim = layer.out_dim;
    out.in_dim = layer.in_dim;
    out.activation = layer.activation;
    out.lut = build_codebook(dist, cfg);

    const auto codes = encode_params(layer.weights, *out.lut.intervals);
    out.codes = pack_codes(codes, cfg.code_bits);

    const QFormat bias_fmt = q_level_format(8);
    out.bias_raw.reserve(layer.bias.size());
    for (double b : layer.bias) {
        out.bias_raw.push_back(static_cast<int8_t>(to_fixed(b, bias_fmt).raw));
    }

    if (report) {
        report->scheme = cfg.scheme;
        report->code_bits = cfg.code_bits;
        report->magnitude_bits = cfg.magnitude_bits;
        report->external_intervals = out.lut.intervals->external_count;
        report->internal_intervals = out.lut.intervals->internal_count;
        report->shift = out.lut.shift;
        report->distinct_levels = distinct_level_count(out.lut);
        report->code_bytes = out.codes.bytes.size();
        report->degenerate = out.lut.degenerate;
    }
    return out;
}

QuantizedModel quantize_model(const FloatModel& model, std::span<const QuantizationConfig> configs,
                              std::vector<LayerQuantReport>* reports) {
    model.validate();
    if (configs.empty()) throw ConfigError("no quantization config given");
    if (configs.size() != 1 && configs.size() != model.layers.size()) {
        throw ConfigError("config count must be 1 or match the layer count");
    }
    QuantizedModel out;
    out.layers.reserve(model.layers.size());
    if (reports) reports->clear();
    for (size_t i = 0; i < model.layers.size(); ++i) {
        const QuantizationConfig& cfg = configs.size() == 1 ? configs[0] : configs[i];
        LayerQuantReport report;
        report.layer_index = i;
        out.layers.push_back(quantize_layer(model.layers[i], cfg, reports ? &report : nullptr));
        if (reports) reports->push_back(report);
    }
    return out;
}

FloatModel dequantize_model(const QuantizedModel& model) {
    model.validate();
    FloatModel out;
    out.layers.reserve(model.layers.size());
    for (const auto& qlayer : model.layers) {
        LayerDef layer;
        layer.out_dim = qlayer.out_dim;
        layer.in_dim = qlayer.in_dim;
        layer.activation = qlayer.activation;
        layer.weights = decode_codes(unpack_codes(qlayer.codes), qlayer.lut);
        layer.bias.reserve(qlayer.bias_raw.size());
        for (int8_t raw : qlayer.bias_raw) {
            layer.bias.push_back(from_fixed(FixedValue{raw, q_level_format(8)}));
        }
        out.layers.push_back(std::move(layer));
    }
    return out;
}

} // namespace lutq
