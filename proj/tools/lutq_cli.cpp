// lutq: quantize feedforward models into LUT-coded containers, inspect the
// results, and run the fixed-point inference paths.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "lutq/distribution.hpp"
#include "lutq/inference.hpp"
#include "lutq/metrics.hpp"
#include "lutq/model_io.hpp"
#include "lutq/quantize.hpp"
#include "lutq/synthetic.hpp"

using json = nlohmann::json;
using namespace lutq;

namespace {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("LUTQ_LOG");
        if (!env) return LogLevel::info;
        const std::string v(env);
        if (v == "quiet") return LogLevel::quiet;
        if (v == "debug") return LogLevel::debug;
        return LogLevel::info;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) std::cerr << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::debug) std::cerr << msg << "\n";
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

std::vector<uint32_t> parse_u32_list(const std::string& s, const char* what) {
    std::vector<uint32_t> out;
    for (const auto& part : split(s, ',')) {
        try {
            const long v = std::stol(part);
            if (v <= 0) throw std::out_of_range(part);
            out.push_back(static_cast<uint32_t>(v));
        } catch (const std::exception&) {
            throw ConfigError(std::string("bad ") + what + " entry: '" + part + "'");
        }
    }
    if (out.empty()) throw ConfigError(std::string("empty ") + what + " list");
    return out;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
    std::vector<int> out;
    for (uint32_t v : parse_u32_list(s, what)) out.push_back(static_cast<int>(v));
    return out;
}

Activation parse_activation(const std::string& s) {
    if (s == "relu") return Activation::relu;
    if (s == "none") return Activation::none;
    throw ConfigError("unknown activation: " + s);
}

// Shared quantization flags; scheme and code width accept one value or a
// comma list with one entry per layer.
struct QuantFlags {
    std::string schemes = "RSVBS";
    std::string code_bits = "4";
    int magnitude_bits = 8;
    double ratio = 1.0;
    double p_start = 0.04;
    double p_stop = -1.0; // default: 1 - p_start
    int max_shift = 8;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--scheme", schemes, "U, UVBS, RS or RSVBS; comma list for per-layer");
        cmd->add_option("-n,--code-bits", code_bits, "code width n; comma list for per-layer");
        cmd->add_option("-m,--magnitude-bits", magnitude_bits, "stored magnitude width m");
        cmd->add_option("--ratio", ratio, "internal/external interval count ratio");
        cmd->add_option("--p-start", p_start, "lower probability bound of the dense region");
        cmd->add_option("--p-stop", p_stop, "upper probability bound (default 1 - p_start)");
        cmd->add_option("--max-shift", max_shift, "cap on the virtual bit shift");
    }

    std::vector<QuantizationConfig> build(size_t layer_count) const {
        QuantizationConfig base;
        base.magnitude_bits = magnitude_bits;
        base.partition_ratio = ratio;
        base.p_start = p_start;
        base.p_stop = p_stop < 0.0 ? 1.0 - p_start : p_stop;
        base.max_shift = max_shift;

        const auto scheme_names = split(schemes, ',');
        const auto widths = parse_int_list(code_bits, "code width");
        if (scheme_names.size() != 1 && scheme_names.size() != layer_count) {
            throw ConfigError("scheme list must have 1 entry or one per layer");
        }
        if (widths.size() != 1 && widths.size() != layer_count) {
            throw ConfigError("code width list must have 1 entry or one per layer");
        }
        std::vector<QuantizationConfig> configs(layer_count, base);
        for (size_t i = 0; i < layer_count; ++i) {
            configs[i].scheme =
                parse_scheme(scheme_names.size() == 1 ? scheme_names[0] : scheme_names[i]);
            configs[i].code_bits = widths.size() == 1 ? widths[0] : widths[i];
            configs[i].validate();
        }
        return configs;
    }
};

// --- gen-synthetic -----------------------------------------------------------

void run_gen_synthetic(const std::string& out_path, const std::string& dims_str, double sigma,
                       double clamp, uint64_t seed, const std::string& activation) {
    const auto dims = parse_u32_list(dims_str, "dimension");
    const FloatModel model =
        make_synthetic_model(dims, sigma, clamp, seed, parse_activation(activation));
    const uint64_t bytes = save_float_model(model, out_path);
    size_t params = 0;
    for (const auto& layer : model.layers) params += layer.weight_count() + layer.out_dim;
    log_info("wrote " + out_path + ": " + std::to_string(model.layers.size()) + " layers, " +
             std::to_string(params) + " parameters, " + std::to_string(bytes) + " bytes");
}

// --- analyze -----------------------------------------------------------------

void run_analyze(const std::string& model_path, bool as_json) {
    const FloatModel model = load_float_model(model_path);
    const double quantiles[] = {0.01, 0.04, 0.25, 0.5, 0.75, 0.96, 0.99};

    for (size_t i = 0; i < model.layers.size(); ++i) {
        const auto& layer = model.layers[i];
        EmpiricalDistribution dist(std::vector<double>(layer.weights.begin(), layer.weights.end()));
        long double acc = 0.0L;
        for (double w : layer.weights) acc += w;
        const double mean = static_cast<double>(acc / layer.weights.size());
        long double var = 0.0L;
        for (double w : layer.weights) var += (w - mean) * (w - mean);
        const double stddev =
            std::sqrt(static_cast<double>(var / static_cast<long double>(layer.weights.size())));

        if (as_json) {
            json j;
            j["layer"] = i;
            j["out_dim"] = layer.out_dim;
            j["in_dim"] = layer.in_dim;
            j["count"] = layer.weights.size();
            j["min"] = dist.min();
            j["max"] = dist.max();
            j["mean"] = mean;
            j["stddev"] = stddev;
            j["degenerate"] = dist.degenerate();
            if (!dist.degenerate()) {
                json q;
                for (double p : quantiles) q[std::to_string(p)] = dist.inv_cdf(p);
                j["quantiles"] = q;
            }
            std::cout << j.dump() << "\n";
        } else {
            std::printf("layer %zu: %ux%u, %zu weights\n", i, layer.out_dim, layer.in_dim,
                        layer.weights.size());
            std::printf("  range [%.9g, %.9g], mean %.9g, stddev %.9g\n", dist.min(), dist.max(),
                        mean, stddev);
            if (dist.degenerate()) {
                std::printf("  degenerate: all weights equal\n");
            } else {
                std::printf("  quantiles:");
                for (double p : quantiles) std::printf(" %g:%.9g", p, dist.inv_cdf(p));
                std::printf("\n");
            }
        }
    }
    if (model.clamped_on_load) {
        log_info(std::to_string(model.clamped_on_load) + " values clamped on load");
    }
}

// --- quantize ----------------------------------------------------------------

void run_quantize(const std::string& model_path, const std::string& out_path,
                  const QuantFlags& flags, bool as_json) {
    const FloatModel model = load_float_model(model_path);
    if (model.clamped_on_load) {
        log_info(std::to_string(model.clamped_on_load) + " values clamped on load");
    }
    const auto configs = flags.build(model.layers.size());

    std::vector<LayerQuantReport> reports;
    const QuantizedModel qmodel = quantize_model(model, configs, &reports);
    const uint64_t bytes = save_quantized_model(qmodel, out_path);

    uint64_t code_bytes = 0;
    uint64_t ref_bytes = 0;
    for (const auto& layer : qmodel.layers) {
        code_bytes += layer.codes.bytes.size();
        ref_bytes += layer.weight_count(); // 8-bit reference, one byte per weight
    }

    for (const auto& r : reports) {
        if (as_json) {
            json j;
            j["layer"] = r.layer_index;
            j["scheme"] = scheme_name(r.scheme);
            j["code_bits"] = r.code_bits;
            j["magnitude_bits"] = r.magnitude_bits;
            j["external_intervals"] = r.external_intervals;
            j["internal_intervals"] = r.internal_intervals;
            j["shift"] = r.shift;
            j["distinct_levels"] = r.distinct_levels;
            j["code_bytes"] = r.code_bytes;
            j["degenerate"] = r.degenerate;
            std::cout << j.dump() << "\n";
        } else {
            std::printf("layer %zu: %s n=%d m=%d ext=%d int=%d k=%d distinct=%zu codes=%llu bytes%s\n",
                        r.layer_index, scheme_name(r.scheme), r.code_bits, r.magnitude_bits,
                        r.external_intervals, r.internal_intervals, r.shift, r.distinct_levels,
                        static_cast<unsigned long long>(r.code_bytes),
                        r.degenerate ? " (degenerate)" : "");
        }
    }
    if (!as_json) {
        std::printf("total code payload %llu bytes, %.1f%% below the 8-bit reference\n",
                    static_cast<unsigned long long>(code_bytes),
                    100.0 * (1.0 - static_cast<double>(code_bytes) / static_cast<double>(ref_bytes)));
    }
    log_info("wrote " + out_path + ": " + std::to_string(bytes) + " bytes");
}

// --- dequantize --------------------------------------------------------------

void run_dequantize(const std::string& model_path, const std::string& out_path) {
    const QuantizedModel qmodel = load_quantized_model(model_path);
    const FloatModel model = dequantize_model(qmodel);
    const uint64_t bytes = save_float_model(model, out_path);
    log_info("wrote " + out_path + ": " + std::to_string(bytes) + " bytes");
}

// --- infer -------------------------------------------------------------------

std::vector<std::vector<double>> read_csv_inputs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& cell : split(line, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw DataError("bad number in input CSV: '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("input CSV holds no rows");
    return rows;
}

void write_csv_outputs(std::ostream& out, const std::vector<std::vector<double>>& rows) {
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.12g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << "\n";
    }
}

void run_infer(const std::string& model_path, const std::string& mode, const std::string& input_path,
               size_t random_count, uint64_t seed, int in_frac, int act_frac,
               const std::string& out_path) {
    const std::string magic = sniff_container(model_path);

    std::string effective_mode = mode;
    if (effective_mode == "auto") effective_mode = magic == "FPM1" ? "float" : "dequantized";
    if (effective_mode == "float" && magic != "FPM1") {
        throw ConfigError("float mode needs an FPM1 model");
    }
    if (effective_mode != "float" && magic != "QLT1") {
        throw ConfigError(effective_mode + " mode needs a QLT1 model");
    }

    size_t in_dim = 0;
    FloatModel fmodel;
    QuantizedModel qmodel;
    if (magic == "FPM1") {
        fmodel = load_float_model(model_path);
        in_dim = fmodel.layers.front().in_dim;
    } else {
        qmodel = load_quantized_model(model_path);
        in_dim = qmodel.layers.front().in_dim;
    }

    std::vector<std::vector<double>> inputs;
    if (!input_path.empty()) {
        inputs = read_csv_inputs(input_path);
    } else {
        inputs = make_probe_inputs(random_count, in_dim, seed);
        log_debug("generated " + std::to_string(random_count) + " random probes");
    }

    std::vector<std::vector<double>> outputs;
    outputs.reserve(inputs.size());
    uint64_t saturations = 0;
    for (const auto& input : inputs) {
        if (effective_mode == "float") {
            outputs.push_back(forward_float(fmodel, input));
        } else if (effective_mode == "dequantized") {
            outputs.push_back(forward_quantized(qmodel, input, QuantizedMode::dequantized).output);
        } else if (effective_mode == "integer") {
            IntegerOptions opts;
            opts.input_format = q_signed(in_frac + 1, in_frac);
            opts.activation_format = q_signed(act_frac + 1, act_frac);
            auto result = forward_quantized(qmodel, input, QuantizedMode::integer, opts);
            saturations += result.saturation_count;
            outputs.push_back(std::move(result.output));
        } else {
            throw ConfigError("unknown mode: " + mode);
        }
    }

    if (out_path.empty()) {
        write_csv_outputs(std::cout, outputs);
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot open " + out_path + " for writing");
        write_csv_outputs(out, outputs);
    }
    if (effective_mode == "integer") {
        log_info("saturated output conversions: " + std::to_string(saturations));
    }
}

// --- footprint ---------------------------------------------------------------

void run_footprint(const std::string& arch_str, const std::string& widths_str, bool as_csv,
                   bool as_json) {
    const auto arch = parse_u32_list(arch_str, "dimension");
    const auto widths = parse_int_list(widths_str, "width");
    const FootprintReport report = footprint(arch, widths);

    if (as_csv) {
        std::printf("layer,in_dim,out_dim,code_bits,code_bytes,lut_bytes,bias_bytes\n");
        for (size_t i = 0; i < report.layers.size(); ++i) {
            const auto& l = report.layers[i];
            std::printf("%zu,%u,%u,%d,%llu,%llu,%llu\n", i, l.in_dim, l.out_dim, l.code_bits,
                        static_cast<unsigned long long>(l.code_bytes),
                        static_cast<unsigned long long>(l.lut_bytes),
                        static_cast<unsigned long long>(l.bias_bytes));
        }
        return;
    }
    if (as_json) {
        json j;
        j["total_code_bytes"] = report.total_code_bytes;
        j["total_lut_bytes"] = report.total_lut_bytes;
        j["total_bias_bytes"] = report.total_bias_bytes;
        j["reference_bytes"] = report.reference_bytes;
        j["reduction_percent"] = 100.0 * report.reduction();
        std::cout << j.dump() << "\n";
        return;
    }
    for (size_t i = 0; i < report.layers.size(); ++i) {
        const auto& l = report.layers[i];
        std::printf("layer %zu: %ux%u at n=%d -> %llu code bytes (LUT %llu, bias %llu)\n", i,
                    l.out_dim, l.in_dim, l.code_bits, static_cast<unsigned long long>(l.code_bytes),
                    static_cast<unsigned long long>(l.lut_bytes),
                    static_cast<unsigned long long>(l.bias_bytes));
    }
    std::printf("external code memory: %llu bytes (8-bit reference %llu), reduction %.1f%%\n",
                static_cast<unsigned long long>(report.total_code_bytes),
                static_cast<unsigned long long>(report.reference_bytes),
                100.0 * report.reduction());
}

// --- sweep -------------------------------------------------------------------

void run_sweep(const std::string& model_path, size_t layer, const std::string& schemes_str,
               const QuantFlags& flags, const std::string& other_scheme, int other_n,
               size_t probe_count, uint64_t seed) {
    const FloatModel model = load_float_model(model_path);
    if (layer >= model.layers.size()) throw ConfigError("layer index out of range");

    std::vector<Scheme> schemes;
    for (const auto& name : split(schemes_str, ',')) schemes.push_back(parse_scheme(name));

    auto swept_list = flags.build(1);
    QuantizationConfig swept = swept_list[0];
    QuantizationConfig other = swept;
    other.scheme = parse_scheme(other_scheme);
    other.code_bits = other_n;
    other.validate();

    const auto probes = make_probe_inputs(probe_count, model.layers.front().in_dim, seed);
    const auto rows = scheme_sweep(model, layer, schemes, swept, other, probes);
    std::cout << sweep_csv(rows);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LUT-coded weight quantization toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read defaults from an INI file");
    app.set_version_flag("--version", "lutq 0.1.0");

    app.add_option_function<int>(
        "--threads",
        [](int t) {
#ifdef _OPENMP
            if (t > 0) omp_set_num_threads(t);
#else
            (void)t;
#endif
        },
        "worker thread count (0 = runtime default)");

    // gen-synthetic
    auto* gen = app.add_subcommand("gen-synthetic", "write a seeded random model");
    std::string gen_out;
    std::string gen_dims = "64,32,16";
    double gen_sigma = 0.1;
    double gen_clamp = 1.0;
    uint64_t gen_seed = 1;
    std::string gen_act = "relu";
    gen->add_option("-o,--out", gen_out, "output FPM1 path")->required();
    gen->add_option("--dims", gen_dims, "architecture chain, e.g. 64,32,16");
    gen->add_option("--sigma", gen_sigma, "normal sigma before clamping");
    gen->add_option("--clamp", gen_clamp, "clamp bound");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--activation", gen_act, "relu or none");
    gen->callback([&] { run_gen_synthetic(gen_out, gen_dims, gen_sigma, gen_clamp, gen_seed, gen_act); });

    // analyze
    auto* analyze = app.add_subcommand("analyze", "per-layer weight distribution stats");
    std::string analyze_model;
    bool analyze_json = false;
    analyze->add_option("--model", analyze_model, "FPM1 path")->required();
    analyze->add_flag("--json", analyze_json, "JSON lines instead of text");
    analyze->callback([&] { run_analyze(analyze_model, analyze_json); });

    // quantize
    auto* quant = app.add_subcommand("quantize", "quantize a float model into a QLT1 container");
    std::string quant_model;
    std::string quant_out;
    bool quant_json = false;
    QuantFlags quant_flags;
    quant->add_option("--model", quant_model, "FPM1 path")->required();
    quant->add_option("-o,--out", quant_out, "output QLT1 path")->required();
    quant_flags.add_to(quant);
    quant->add_flag("--json", quant_json, "JSON lines instead of text");
    quant->callback([&] { run_quantize(quant_model, quant_out, quant_flags, quant_json); });

    // dequantize
    auto* deq = app.add_subcommand("dequantize", "decode a QLT1 container back to FPM1");
    std::string deq_model;
    std::string deq_out;
    deq->add_option("--model", deq_model, "QLT1 path")->required();
    deq->add_option("-o,--out", deq_out, "output FPM1 path")->required();
    deq->callback([&] { run_dequantize(deq_model, deq_out); });

    // infer
    auto* infer = app.add_subcommand("infer", "run the forward pass, outputs as CSV");
    std::string infer_model;
    std::string infer_mode = "auto";
    std::string infer_input;
    std::string infer_out;
    size_t infer_random = 8;
    uint64_t infer_seed = 1;
    int infer_in_frac = 7;
    int infer_act_frac = 7;
    infer->add_option("--model", infer_model, "FPM1 or QLT1 path")->required();
    infer->add_option("--mode", infer_mode, "auto, float, dequantized or integer");
    infer->add_option("--input", infer_input, "CSV of input rows (default: random probes)");
    infer->add_option("--random", infer_random, "random probe count when no CSV is given");
    infer->add_option("--seed", infer_seed, "probe RNG seed");
    infer->add_option("--in-frac", infer_in_frac, "integer mode: input fractional bits");
    infer->add_option("--act-frac", infer_act_frac, "integer mode: activation fractional bits");
    infer->add_option("-o,--out", infer_out, "output CSV path (default stdout)");
    infer->callback([&] {
        run_infer(infer_model, infer_mode, infer_input, infer_random, infer_seed, infer_in_frac,
                  infer_act_frac, infer_out);
    });

    // footprint
    auto* fp = app.add_subcommand("footprint", "code memory accounting for an architecture");
    std::string fp_arch;
    std::string fp_widths = "4";
    bool fp_csv = false;
    bool fp_json = false;
    fp->add_option("--arch", fp_arch, "architecture chain, e.g. 1032,256,129")->required();
    fp->add_option("--widths", fp_widths, "code width per layer, or one for all");
    fp->add_flag("--csv", fp_csv, "CSV per-layer rows");
    fp->add_flag("--json", fp_json, "JSON totals");
    fp->callback([&] { run_footprint(fp_arch, fp_widths, fp_csv, fp_json); });

    // sweep
    auto* sweep = app.add_subcommand("sweep", "compare schemes on one layer, CSV to stdout");
    std::string sweep_model;
    size_t sweep_layer = 0;
    std::string sweep_schemes = "U,UVBS,RS,RSVBS";
    std::string sweep_other_scheme = "U";
    int sweep_other_n = 8;
    size_t sweep_probes = 256;
    uint64_t sweep_seed = 1;
    QuantFlags sweep_flags;
    sweep->add_option("--model", sweep_model, "FPM1 path")->required();
    sweep->add_option("--layer", sweep_layer, "swept layer index (0-based)");
    sweep->add_option("--schemes", sweep_schemes, "comma list of schemes to sweep");
    sweep_flags.add_to(sweep);
    sweep->add_option("--other-scheme", sweep_other_scheme, "scheme for the non-swept layers");
    sweep->add_option("--other-n", sweep_other_n, "code width for the non-swept layers");
    sweep->add_option("--probes", sweep_probes, "probe input count");
    sweep->add_option("--seed", sweep_seed, "probe RNG seed");
    sweep->callback([&] {
        run_sweep(sweep_model, sweep_layer, sweep_schemes, sweep_flags, sweep_other_scheme,
                  sweep_other_n, sweep_probes, sweep_seed);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
