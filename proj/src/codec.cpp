#include "lutq/codec.hpp"

#include <string>

#include "lutq/errors.hpp"
#include "lutq/kernels.hpp"

namespace lutq {

std::vector<uint16_t> encode_params(std::span<const double> params, const IntervalSet& intervals) {
    if (intervals.edges.size() != intervals.labels.size() + 1 || intervals.labels.empty()) {
        throw ConfigError("malformed interval set");
    }
    std::vector<uint16_t> codes(params.size());
    kernels::encode_parallel(params, intervals.edges, codes);
    return codes;
}

CodeStream pack_codes(std::span<const uint16_t> codes, int code_bits) {
    if (code_bits < 1 || code_bits > 16) throw ConfigError("code width must lie in [1, 16]");
    const uint32_t limit = uint32_t{1} << code_bits;
    CodeStream stream;
    stream.code_bits = code_bits;
    stream.count = codes.size();
    stream.bytes.assign(stream.byte_size(), 0);
    for (size_t i = 0; i < codes.size(); ++i) {
        if (codes[i] >= limit) {
            throw DataError("code " + std::to_string(codes[i]) + " does not fit in " +
                            std::to_string(code_bits) + " bits");
        }
        const size_t bit = i * static_cast<size_t>(code_bits);
        const size_t byte = bit >> 3;
        const unsigned off = static_cast<unsigned>(bit & 7);
        const uint32_t chunk = static_cast<uint32_t>(codes[i]) << off;
        stream.bytes[byte] |= static_cast<uint8_t>(chunk & 0xFF);
        if (off + static_cast<unsigned>(code_bits) > 8) {
            stream.bytes[byte + 1] |= static_cast<uint8_t>((chunk >> 8) & 0xFF);
        }
        if (off + static_cast<unsigned>(code_bits) > 16) {
            stream.bytes[byte + 2] |= static_cast<uint8_t>((chunk >> 16) & 0xFF);
        }
    }
    return stream;
}

std::vector<uint16_t> unpack_codes(const CodeStream& stream) {
    if (stream.code_bits < 1 || stream.code_bits > 16) {
        throw CorruptionError("code stream declares invalid code width");
    }
    if (stream.bytes.size() != stream.byte_size()) {
        throw CorruptionError("code stream holds " + std::to_string(stream.bytes.size()) +
                              " bytes, expected " + std::to_string(stream.byte_size()));
    }
    if (!stream.bytes.empty()) {
        const unsigned used = static_cast<unsigned>(stream.bit_size() - (stream.bytes.size() - 1) * 8);
        const uint8_t pad_mask = static_cast<uint8_t>(0xFF & ~((1u << used) - 1u));
        if ((stream.bytes.back() & pad_mask) != 0) throw CorruptionError("nonzero pad bits");
    }
    const uint32_t mask = (uint32_t{1} << stream.code_bits) - 1;
    std::vector<uint16_t> codes(stream.count);
    for (size_t i = 0; i < stream.count; ++i) {
        const size_t bit = i * static_cast<size_t>(stream.code_bits);
        const size_t byte = bit >> 3;
        const unsigned off = static_cast<unsigned>(bit & 7);
        uint32_t chunk = stream.bytes[byte];
        if (byte + 1 < stream.bytes.size()) chunk |= static_cast<uint32_t>(stream.bytes[byte + 1]) << 8;
        if (byte + 2 < stream.bytes.size()) chunk |= static_cast<uint32_t>(stream.bytes[byte + 2]) << 16;
        codes[i] = static_cast<uint16_t>((chunk >> off) & mask);
    }
    return codes;
}

std::vector<double> decode_codes(std::span<const uint16_t> codes, const Codebook& lut) {
    std::vector<double> out(codes.size());
    const size_t table_size = lut.entries.size();
    for (size_t i = 0; i < codes.size(); ++i) {
        if (codes[i] >= table_size) throw CorruptionError("code outside the LUT range");
        out[i] = lut.entries[codes[i]].value;
    }
    return out;
}

} // namespace lutq
