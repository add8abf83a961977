#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lutq/codebook.hpp"
#include "lutq/partition.hpp"

namespace lutq {

// Packed n-bit codes, least-significant bits first within each byte, first
// code in the lowest bits. Pad bits of the final byte are zero.
struct CodeStream {
    std::vector<uint8_t> bytes;
    int code_bits = 4;
    size_t count = 0;

    size_t byte_size() const { return (count * static_cast<size_t>(code_bits) + 7) / 8; }
    size_t bit_size() const { return count * static_cast<size_t>(code_bits); }
};

// Interval index per parameter via binary search; values outside the range
// clamp to the first/last code.
std::vector<uint16_t> encode_params(std::span<const double> params, const IntervalSet& intervals);

CodeStream pack_codes(std::span<const uint16_t> codes, int code_bits);

std::vector<uint16_t> unpack_codes(const CodeStream& stream);

std::vector<double> decode_codes(std::span<const uint16_t> codes, const Codebook& lut);

} // namespace lutq
