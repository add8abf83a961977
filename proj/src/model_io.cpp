#include "lutq/model_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lutq/errors.hpp"

namespace lutq {

namespace {

constexpr char kFloatMagic[4] = {'F', 'P', 'M', '1'};
constexpr char kQuantMagic[4] = {'Q', 'L', 'T', '1'};
constexpr uint32_t kMaxDim = 1u << 24;
constexpr uint32_t kMaxLayers = 1u << 16;

void write_u32(std::ostream& out, uint32_t v) {
    const uint8_t b[4] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8),
                          static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u16(std::ostream& out, uint16_t v) {
    const uint8_t b[2] = {static_cast<uint8_t>(v), static_cast<uint8_t>(v >> 8)};
    out.write(reinterpret_cast<const char*>(b), 2);
}

void write_u8(std::ostream& out, uint8_t v) {
    out.put(static_cast<char>(v));
}

void write_f32(std::ostream& out, float v) {
    write_u32(out, std::bit_cast<uint32_t>(v));
}

uint32_t read_u32(std::istream& in) {
    uint8_t b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) throw CorruptionError("truncated payload");
    return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 |
           static_cast<uint32_t>(b[2]) << 16 | static_cast<uint32_t>(b[3]) << 24;
}

uint16_t read_u16(std::istream& in) {
    uint8_t b[2];
    if (!in.read(reinterpret_cast<char*>(b), 2)) throw CorruptionError("truncated payload");
    return static_cast<uint16_t>(b[0] | b[1] << 8);
}

uint8_t read_u8(std::istream& in) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw CorruptionError("truncated payload");
    return static_cast<uint8_t>(c);
}

float read_f32(std::istream& in) {
    return std::bit_cast<float>(read_u32(in));
}

void check_magic(std::istream& in, const char expected[4]) {
    char magic[4];
    if (!in.read(magic, 4)) throw FormatError("file too short for a magic tag");
    for (int i = 0; i < 4; ++i) {
        if (magic[i] != expected[i]) {
            throw FormatError(std::string("bad magic, expected \"") + std::string(expected, 4) + "\"");
        }
    }
}

uint32_t read_dim(std::istream& in) {
    const uint32_t d = read_u32(in);
    if (d == 0 || d > kMaxDim) throw FormatError("layer dimension out of range");
    return d;
}

Activation read_activation(std::istream& in) {
    const uint8_t tag = read_u8(in);
    if (tag > 1) throw FormatError("unknown activation tag");
    return static_cast<Activation>(tag);
}

} // namespace

void FloatModel::validate() const {
    if (layers.empty()) throw FormatError("model holds no layers");
    for (const auto& layer : layers) {
        if (layer.out_dim == 0 || layer.in_dim == 0) throw FormatError("layer dimension is zero");
        if (layer.weights.size() != layer.weight_count()) throw FormatError("weight count mismatch");
        if (layer.bias.size() != layer.out_dim) throw FormatError("bias count mismatch");
        for (double w : layer.weights) {
            if (!std::isfinite(w)) throw DataError("non-finite weight");
            if (w < -1.0 || w > 1.0) throw DataError("weight outside [-1, 1]");
        }
        for (double b : layer.bias) {
            if (!std::isfinite(b)) throw DataError("non-finite bias");
            if (b < -1.0 || b > 1.0) throw DataError("bias outside [-1, 1]");
        }
    }
}

void QuantizedModel::validate() const {
    if (layers.empty()) throw FormatError("model holds no layers");
    for (const auto& layer : layers) {
        if (layer.out_dim == 0 || layer.in_dim == 0) throw FormatError("layer dimension is zero");
        const int n = layer.lut.code_bits;
        const int m = layer.lut.magnitude_bits;
        if (n < 2 || n > m || m > 16) throw FormatError("invalid code/magnitude widths");
        if (layer.lut.entries.size() != (size_t{1} << n)) throw FormatError("LUT entry count mismatch");
        for (const auto& e : layer.lut.entries) {
            if (e.magnitude >= (uint32_t{1} << m)) throw FormatError("LUT magnitude does not fit");
            if (e.sign != 1 && e.sign != -1) throw FormatError("LUT sign must be +-1");
        }
        if (layer.codes.code_bits != n) throw FormatError("code stream width mismatch");
        if (layer.codes.count != layer.weight_count()) throw FormatError("code count mismatch");
        if (layer.codes.bytes.size() != layer.codes.byte_size()) throw FormatError("code payload size mismatch");
        if (layer.bias_raw.size() != layer.out_dim) throw FormatError("bias count mismatch");
    }
}

FloatModel read_float_model(std::istream& in) {
    check_magic(in, kFloatMagic);
    const uint32_t layer_count = read_u32(in);
    if (layer_count == 0 || layer_count > kMaxLayers) throw FormatError("bad layer count");

    FloatModel model;
    model.layers.resize(layer_count);
    for (auto& layer : model.layers) {
        layer.out_dim = read_dim(in);
        layer.in_dim = read_dim(in);
        layer.activation = read_activation(in);
        layer.weights.resize(layer.weight_count());
        for (double& w : layer.weights) {
            const float f = read_f32(in);
            if (!std::isfinite(f)) throw DataError("non-finite weight in file");
            double v = static_cast<double>(f);
            if (v < -1.0) { v = -1.0; ++model.clamped_on_load; }
            if (v > 1.0) { v = 1.0; ++model.clamped_on_load; }
            w = v;
        }
        layer.bias.resize(layer.out_dim);
        for (double& b : layer.bias) {
            const float f = read_f32(in);
            if (!std::isfinite(f)) throw DataError("non-finite bias in file");
            double v = static_cast<double>(f);
            if (v < -1.0) { v = -1.0; ++model.clamped_on_load; }
            if (v > 1.0) { v = 1.0; ++model.clamped_on_load; }
            b = v;
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) throw CorruptionError("trailing bytes after payload");
    return model;
}

void write_float_model(const FloatModel& model, std::ostream& out) {
    model.validate();
    out.write(kFloatMagic, 4);
    write_u32(out, static_cast<uint32_t>(model.layers.size()));
    for (const auto& layer : model.layers) {
        write_u32(out, layer.out_dim);
        write_u32(out, layer.in_dim);
        write_u8(out, static_cast<uint8_t>(layer.activation));
        for (double w : layer.weights) write_f32(out, static_cast<float>(w));
        for (double b : layer.bias) write_f32(out, static_cast<float>(b));
    }
    if (!out) throw Error("write failure");
}

QuantizedModel read_quantized_model(std::istream& in) {
    check_magic(in, kQuantMagic);
    const uint32_t layer_count = read_u32(in);
    if (layer_count == 0 || layer_count > kMaxLayers) throw FormatError("bad layer count");

    QuantizedModel model;
    model.layers.resize(layer_count);
    for (auto& layer : model.layers) {
        layer.out_dim = read_dim(in);
        layer.in_dim = read_dim(in);
        const uint8_t scheme_tag = read_u8(in);
        if (scheme_tag > 3) throw FormatError("unknown scheme tag");
        const uint8_t n = read_u8(in);
        const uint8_t m = read_u8(in);
        if (n < 2 || n > m || m > 16) throw FormatError("invalid code/magnitude widths");
        layer.activation = read_activation(in);

        layer.lut.scheme = static_cast<Scheme>(scheme_tag);
        layer.lut.code_bits = n;
        layer.lut.magnitude_bits = m;
        layer.lut.entries.resize(size_t{1} << n);
        int max_shift = 0;
        for (auto& e : layer.lut.entries) {
            e.magnitude = read_u16(in);
            if (e.magnitude >= (uint32_t{1} << m)) throw CorruptionError("LUT magnitude does not fit");
            const uint8_t sign_tag = read_u8(in);
            if (sign_tag > 1) throw CorruptionError("bad sign byte");
            e.sign = sign_tag == 0 ? 1 : -1;
            e.shift = read_u8(in);
            if (e.shift > 16) throw CorruptionError("bad shift byte");
            const uint8_t part_tag = read_u8(in);
            if (part_tag > 1) throw CorruptionError("bad partition byte");
            e.partition = static_cast<PartitionLabel>(part_tag);
            e.value = lut_value(e.magnitude, e.sign, e.shift, m);
            max_shift = std::max<int>(max_shift, e.shift);
        }
        layer.lut.shift = max_shift;

        layer.bias_raw.resize(layer.out_dim);
        for (int8_t& b : layer.bias_raw) b = static_cast<int8_t>(read_u8(in));

        layer.codes.code_bits = n;
        layer.codes.count = layer.weight_count();
        layer.codes.bytes.resize(layer.codes.byte_size());
        if (!in.read(reinterpret_cast<char*>(layer.codes.bytes.data()),
                     static_cast<std::streamsize>(layer.codes.bytes.size()))) {
            throw CorruptionError("truncated code payload");
        }
        if (!layer.codes.bytes.empty()) {
            const unsigned used =
                static_cast<unsigned>(layer.codes.bit_size() - (layer.codes.bytes.size() - 1) * 8);
            const uint8_t pad_mask = static_cast<uint8_t>(0xFF & ~((1u << used) - 1u));
            if ((layer.codes.bytes.back() & pad_mask) != 0) throw CorruptionError("nonzero pad bits");
        }
    }
    if (in.peek() != std::char_traits<char>::eof()) throw CorruptionError("trailing bytes after payload");
    return model;
}

void write_quantized_model(const QuantizedModel& model, std::ostream& out) {
    model.validate();
    out.write(kQuantMagic, 4);
    write_u32(out, static_cast<uint32_t>(model.layers.size()));
    for (const auto& layer : model.layers) {
        write_u32(out, layer.out_dim);
        write_u32(out, layer.in_dim);
        write_u8(out, static_cast<uint8_t>(layer.lut.scheme));
        write_u8(out, static_cast<uint8_t>(layer.lut.code_bits));
        write_u8(out, static_cast<uint8_t>(layer.lut.magnitude_bits));
        write_u8(out, static_cast<uint8_t>(layer.activation));
        for (const auto& e : layer.lut.entries) {
            write_u16(out, e.magnitude);
            write_u8(out, e.sign < 0 ? 1 : 0);
            write_u8(out, e.shift);
            write_u8(out, static_cast<uint8_t>(e.partition));
        }
        for (int8_t b : layer.bias_raw) write_u8(out, static_cast<uint8_t>(b));
        out.write(reinterpret_cast<const char*>(layer.codes.bytes.data()),
                  static_cast<std::streamsize>(layer.codes.bytes.size()));
    }
    if (!out) throw Error("write failure");
}

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return in;
}

uint64_t save_stream(const std::string& path, const auto& writer) {
    std::ostringstream buffer(std::ios::binary);
    writer(buffer);
    const std::string bytes = buffer.str();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failure on " + path);
    return bytes.size();
}

} // namespace

FloatModel load_float_model(const std::string& path) {
    auto in = open_input(path);
    return read_float_model(in);
}

uint64_t save_float_model(const FloatModel& model, const std::string& path) {
    return save_stream(path, [&](std::ostream& out) { write_float_model(model, out); });
}

QuantizedModel load_quantized_model(const std::string& path) {
    auto in = open_input(path);
    return read_quantized_model(in);
}

uint64_t save_quantized_model(const QuantizedModel& model, const std::string& path) {
    return save_stream(path, [&](std::ostream& out) { write_quantized_model(model, out); });
}

std::string sniff_container(const std::string& path) {
    auto in = open_input(path);
    char magic[4];
    if (!in.read(magic, 4)) throw FormatError("file too short for a magic tag");
    const std::string tag(magic, 4);
    if (tag == "FPM1" || tag == "QLT1") return tag;
    throw FormatError("unrecognized container magic");
}

} // namespace lutq
