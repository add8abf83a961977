#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "lutq/model.hpp"

namespace lutq {

// Float-model container, magic "FPM1". Weights are loaded with clamping to
// [-1, 1]; the clamp count lands in FloatModel::clamped_on_load.
FloatModel load_float_model(const std::string& path);
uint64_t save_float_model(const FloatModel& model, const std::string& path);

// Quantized container, magic "QLT1": per layer the LUT records, the 8-bit
// biases and the packed code stream. Byte layout in docs/formats.md.
QuantizedModel load_quantized_model(const std::string& path);
uint64_t save_quantized_model(const QuantizedModel& model, const std::string& path);

// Stream variants used by the file API and the roundtrip tests.
FloatModel read_float_model(std::istream& in);
void write_float_model(const FloatModel& model, std::ostream& out);
QuantizedModel read_quantized_model(std::istream& in);
void write_quantized_model(const QuantizedModel& model, std::ostream& out);

// Peeks at the magic bytes; returns "FPM1", "QLT1" or throws FormatError.
std::string sniff_container(const std::string& path);

} // namespace lutq
