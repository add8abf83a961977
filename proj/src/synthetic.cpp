#include "lutq/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lutq/errors.hpp"

namespace lutq {

namespace {

double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
}

class NormalSource {
public:
    explicit NormalSource(uint64_t seed) : rng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - next_unit(rng_); // (0, 1]
        const double u2 = next_unit(rng_);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi_v<double> * u2;
        spare_ = r * std::sin(angle);
        have_spare_ = true;
        return r * std::cos(angle);
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

double clamp_snap(double v, double clamp) {
    v = std::clamp(v, -clamp, clamp);
    return static_cast<double>(static_cast<float>(v));
}

} // namespace

std::vector<double> sample_clamped_normal(size_t count, double sigma, double clamp, uint64_t seed) {
    if (!(sigma > 0.0) || !(clamp > 0.0)) throw ConfigError("sigma and clamp must be positive");
    NormalSource normal(seed);
    std::vector<double> out(count);
    for (double& v : out) v = clamp_snap(sigma * normal(), clamp);
    return out;
}

FloatModel make_synthetic_model(std::span<const uint32_t> dims, double sigma, double clamp,
                                uint64_t seed, Activation activation) {
    if (dims.size() < 2) throw ConfigError("architecture needs at least two dimensions");
    if (!(sigma > 0.0) || !(clamp > 0.0) || clamp > 1.0) {
        throw ConfigError("require sigma > 0 and 0 < clamp <= 1");
    }
    NormalSource normal(seed);
    FloatModel model;
    for (size_t i = 0; i + 1 < dims.size(); ++i) {
        if (dims[i] == 0 || dims[i + 1] == 0) throw ConfigError("zero dimension in architecture");
        LayerDef layer;
        layer.in_dim = dims[i];
        layer.out_dim = dims[i + 1];
        layer.activation = activation;
        layer.weights.resize(layer.weight_count());
        for (double& w : layer.weights) w = clamp_snap(sigma * normal(), clamp);
        layer.bias.resize(layer.out_dim);
        for (double& b : layer.bias) b = clamp_snap(sigma * normal(), clamp);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

std::vector<std::vector<double>> make_probe_inputs(size_t count, size_t dim, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> probes(count);
    for (auto& probe : probes) {
        probe.resize(dim);
        for (double& v : probe) v = 2.0 * next_unit(rng) - 1.0;
    }
    return probes;
}

} // namespace lutq
