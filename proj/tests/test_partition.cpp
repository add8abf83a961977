#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lutq/partition.hpp"
#include "test_util.hpp"

using namespace lutq;

namespace {

// Direct evaluation of the interval-count rule, kept independent of the
// implementation: the floor is found by counting instead of dividing.
struct CountOracle {
    int external;
    int internal;
    bool valid;
};

CountOracle count_oracle(int code_bits, double ratio) {
    const int total = 1 << code_bits;
    int base = 0;
    while (static_cast<double>(base + 1) * (1.0 + ratio) <= static_cast<double>(total)) ++base;
    const int c = (base % 2 != 0) ? 1 : 0;
    const int ext = base + c;
    const int internal = total - ext;
    return CountOracle{ext, internal, ext >= 2 && internal >= 2};
}

std::vector<double> nine_uniform() {
    std::vector<double> v(9);
    for (int j = 0; j < 9; ++j) v[j] = -0.8 + 0.2 * j;
    return v;
}

QuantizationConfig demo_config() {
    QuantizationConfig cfg;
    cfg.code_bits = 2;
    cfg.magnitude_bits = 8;
    cfg.partition_ratio = 1.0;
    cfg.p_start = 0.25;
    cfg.p_stop = 0.75;
    cfg.scheme = Scheme::range_split;
    return cfg;
}

} // namespace

TEST_CASE("interval counts include the parity correction") {
    CHECK(interval_counts(4, 1.0).external == 8);
    CHECK(interval_counts(4, 1.0).internal == 8);
    CHECK(interval_counts(4, 2.0).external == 6); // floor(16/3) = 5, odd
    CHECK(interval_counts(4, 2.0).internal == 10);
    CHECK(interval_counts(3, 3.0).external == 2);
    CHECK(interval_counts(3, 3.0).internal == 6);
}

TEST_CASE("interval counts match the counting oracle exhaustively") {
    const double ratios[] = {0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 8.0};
    for (int n = 2; n <= 8; ++n) {
        for (double r : ratios) {
            const CountOracle expect = count_oracle(n, r);
            if (!expect.valid) {
                CHECK_THROWS_AS(interval_counts(n, r), ConfigError);
                continue;
            }
            const IntervalCounts got = interval_counts(n, r);
            CHECK(got.external == expect.external);
            CHECK(got.internal == expect.internal);
            CHECK(got.external % 2 == 0);
            CHECK(got.external + got.internal == (1 << n));
        }
    }
}

TEST_CASE("config validation") {
    QuantizationConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.p_stop = 0.9; // not 1 - p_start
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = QuantizationConfig{};
    cfg.code_bits = 9;
    cfg.magnitude_bits = 8;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = QuantizationConfig{};
    cfg.partition_ratio = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("range-split edges on a uniform dataset") {
    SUBCASE("dyadic grid, exact edges") {
        std::vector<double> v(9);
        for (int j = 0; j < 9; ++j) v[j] = -1.0 + 0.25 * j;
        EmpiricalDistribution dist(v);
        const PartitionResult result = build_intervals(dist, demo_config());
        REQUIRE(result.status == PartitionStatus::ok);
        const IntervalSet& set = result.intervals;
        REQUIRE(set.edges.size() == 5);
        CHECK(set.edges[0] == -1.0);
        CHECK(set.edges[1] == -0.5);
        CHECK(set.edges[2] == 0.0);
        CHECK(set.edges[3] == 0.5);
        CHECK(set.edges[4] == 1.0);
        CHECK(set.labels[0] == PartitionLabel::external);
        CHECK(set.labels[1] == PartitionLabel::internal);
        CHECK(set.labels[2] == PartitionLabel::internal);
        CHECK(set.labels[3] == PartitionLabel::external);
        CHECK(set.external_count == 2);
        CHECK(set.internal_count == 2);
    }
    SUBCASE("decimal grid within roundoff") {
        EmpiricalDistribution dist(nine_uniform());
        const PartitionResult result = build_intervals(dist, demo_config());
        REQUIRE(result.status == PartitionStatus::ok);
        const IntervalSet& set = result.intervals;
        REQUIRE(set.edges.size() == 5);
        const double expect[5] = {-0.8, -0.4, 0.0, 0.4, 0.8};
        for (int i = 0; i < 5; ++i) CHECK(std::abs(set.edges[i] - expect[i]) <= 1e-15);
    }
}

TEST_CASE("uniform scheme spans the data range with equal widths") {
    EmpiricalDistribution dist(nine_uniform());
    QuantizationConfig cfg;
    cfg.code_bits = 4;
    cfg.scheme = Scheme::uniform;
    const PartitionResult result = build_intervals(dist, cfg);
    REQUIRE(result.status == PartitionStatus::ok);
    const IntervalSet& set = result.intervals;
    REQUIRE(set.size() == 16);
    CHECK(set.edges.front() == -0.8);
    CHECK(set.edges.back() == 0.8);
    CHECK(set.external_count == 0);
    for (size_t i = 0; i < set.size(); ++i) {
        CHECK(set.labels[i] == PartitionLabel::internal);
        CHECK(set.width(i) == doctest::Approx(0.1).epsilon(1e-12));
    }
}

TEST_CASE("symmetric data yields antisymmetric edges") {
    std::vector<double> values;
    std::mt19937_64 rng(21);
    for (int i = 0; i < 500; ++i) {
        const double v = (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 0.9;
        values.push_back(v);
        values.push_back(-v);
    }
    EmpiricalDistribution dist(values);
    QuantizationConfig cfg;
    cfg.scheme = Scheme::range_split_vbs;
    const PartitionResult result = build_intervals(dist, cfg);
    REQUIRE(result.status == PartitionStatus::ok);
    const auto& edges = result.intervals.edges;
    for (size_t i = 0; i < edges.size(); ++i) {
        CHECK(edges[i] == doctest::Approx(-edges[edges.size() - 1 - i]).epsilon(1e-12));
    }
}

TEST_CASE("interval sets are contiguous and cover every parameter") {
    const std::vector<double> values = testutil::narrow_center_values();
    EmpiricalDistribution dist(values);
    QuantizationConfig cfg;
    cfg.scheme = Scheme::range_split;
    const PartitionResult result = build_intervals(dist, cfg);
    REQUIRE(result.status == PartitionStatus::ok);
    const IntervalSet& set = result.intervals;

    REQUIRE(set.edges.size() == 17);
    CHECK(set.edges.front() == dist.min());
    CHECK(set.edges.back() == dist.max());
    for (size_t i = 0; i + 1 < set.edges.size(); ++i) {
        CHECK(set.edges[i] <= set.edges[i + 1]); // shared edges, computed once
    }

    // Internal widths equal within a tight relative tolerance.
    double internal_width = 0.0;
    for (size_t i = 0; i < set.size(); ++i) {
        if (set.labels[i] != PartitionLabel::internal) continue;
        if (internal_width == 0.0) internal_width = set.width(i);
        CHECK(set.width(i) == doctest::Approx(internal_width).epsilon(1e-12));
    }

    // Every value lands in exactly one interval.
    for (double v : values) {
        int holders = 0;
        for (size_t i = 0; i < set.size(); ++i) {
            const bool last = i + 1 == set.size();
            const bool inside = last ? (v >= set.lower(i) && v <= set.upper(i))
                                     : (v >= set.lower(i) && v < set.upper(i));
            holders += inside ? 1 : 0;
        }
        CHECK(holders == 1);
    }
}

TEST_CASE("degenerate signals") {
    EmpiricalDistribution flat({0.25, 0.25, 0.25, 0.25});
    QuantizationConfig cfg;
    CHECK(build_intervals(flat, cfg).status == PartitionStatus::degenerate_distribution);

    // Wide spikes at the quantile boundaries collapse the internal span.
    std::vector<double> spiky;
    for (int i = 0; i < 480; ++i) spiky.push_back(0.0);
    for (int i = 0; i < 10; ++i) spiky.push_back(-0.5 + i * 0.01);
    for (int i = 0; i < 10; ++i) spiky.push_back(0.4 + i * 0.01);
    EmpiricalDistribution spike(spiky);
    const PartitionResult result = build_intervals(spike, cfg);
    CHECK(result.status == PartitionStatus::degenerate_span);
}
