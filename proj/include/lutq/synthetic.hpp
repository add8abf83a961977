#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lutq/model.hpp"

namespace lutq {

// Seeded generators for models and probe inputs. All randomness flows
// through a fixed algorithm (mt19937_64 plus Box-Muller), so a seed pins
// the output bytes.

std::vector<double> sample_clamped_normal(size_t count, double sigma, double clamp, uint64_t seed);

// dims is the architecture chain (d0, d1, ..., dL). Weights and biases are
// clamped normal draws, snapped to float32 so the container roundtrip is
// lossless.
FloatModel make_synthetic_model(std::span<const uint32_t> dims, double sigma, double clamp,
                                uint64_t seed, Activation activation = Activation::relu);

// Uniform draws in [-1, 1).
std::vector<std::vector<double>> make_probe_inputs(size_t count, size_t dim, uint64_t seed);

} // namespace lutq
