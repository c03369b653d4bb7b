#include <cmath>

#include "doctest.h"
#include "gaitnorm/cycle.hpp"

using namespace gaitnorm;

namespace {

AngleSeries constant_series(JointName joint, std::int64_t first, std::int64_t last, double value) {
    AngleSeries s{joint, {}};
    for (std::int64_t f = first; f <= last; ++f) s.samples.push_back({f, std::nullopt, value, std::nullopt});
    return s;
}

CycleSlice slice_from(const std::vector<std::pair<double, std::optional<double>>>& samples) {
    CycleSlice slice;
    slice.id = "test";
    slice.annotation = {0, 100, CycleLabel::typical};
    auto& out = slice.joints[JointName::left_knee];
    std::int64_t f = 0;
    for (const auto& [phase, angle] : samples) out.push_back({f++, phase, angle});
    return slice;
}

}  // namespace

TEST_CASE("phase_of_frame") {
    const CycleAnnotation c{100, 150, CycleLabel::typical};
    CHECK(phase_of_frame(c, 100) == 0.0);
    CHECK(phase_of_frame(c, 150) == 100.0);
    CHECK(phase_of_frame(c, 125) == 50.0);
    CHECK_THROWS_AS(phase_of_frame(c, 99), ValidationError);
    CHECK_THROWS_AS(phase_of_frame(c, 151), ValidationError);
    double prev = -1.0;
    for (std::int64_t f = 100; f <= 150; ++f) {
        const double p = phase_of_frame(c, f);
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("segment_cycles") {
    AngleSeriesMap series;
    series.emplace(JointName::left_knee, constant_series(JointName::left_knee, 0, 200, 150.0));

    SUBCASE("one annotation spanning 31 frames") {
        const auto slices = segment_cycles(series, {{10, 40, CycleLabel::typical}}, "v");
        REQUIRE(slices.size() == 1);
        CHECK(slices[0].joints.at(JointName::left_knee).size() == 31);
    }
    SUBCASE("adjacent cycles share the heel-strike frame") {
        const auto slices =
            segment_cycles(series, {{100, 150, CycleLabel::typical}, {150, 200, CycleLabel::typical}}, "v");
        REQUIRE(slices.size() == 2);
        const auto& a = slices[0].joints.at(JointName::left_knee);
        const auto& b = slices[1].joints.at(JointName::left_knee);
        CHECK(a.back().frame_index == 150);
        CHECK(a.back().phase == 100.0);
        CHECK(b.front().frame_index == 150);
        CHECK(b.front().phase == 0.0);
        CHECK(slices[0].id != slices[1].id);
    }
    SUBCASE("annotation beyond the sequence") {
        AngleSeriesMap short_series;
        short_series.emplace(JointName::left_knee, constant_series(JointName::left_knee, 0, 19, 150.0));
        CHECK_THROWS_AS(segment_cycles(short_series, {{10, 40, CycleLabel::typical}}), ValidationError);
    }
    SUBCASE("timestamp mode") {
        AngleSeriesMap timed;
        auto s = constant_series(JointName::left_knee, 0, 10, 150.0);
        // Uneven clock: frame k at k² / 100 s.
        for (auto& a : s.samples) a.time_s = static_cast<double>(a.frame_index * a.frame_index) / 100.0;
        timed.emplace(JointName::left_knee, s);
        const auto slices = segment_cycles(timed, {{0, 10, CycleLabel::typical}}, "v", PhaseMode::timestamp);
        CHECK(slices[0].joints.at(JointName::left_knee)[5].phase == doctest::Approx(25.0));
        timed.at(JointName::left_knee).samples[3].time_s.reset();
        CHECK_THROWS_AS(segment_cycles(timed, {{0, 10, CycleLabel::typical}}, "v", PhaseMode::timestamp),
                        ValidationError);
    }
}

TEST_CASE("resample_cycle") {
    SUBCASE("constant data") {
        std::vector<std::pair<double, std::optional<double>>> samples;
        for (int p = 0; p <= 100; ++p) samples.emplace_back(p, 90.0);
        const auto r = resample_cycle(slice_from(samples));
        REQUIRE(r.cycle.valid(JointName::left_knee));
        const auto& curve = r.cycle.curve(JointName::left_knee);
        CHECK(curve.size() == 101);
        for (const double v : curve) CHECK(v == doctest::Approx(90.0).epsilon(1e-12));
    }
    SUBCASE("interior gap on linear data") {
        std::vector<std::pair<double, std::optional<double>>> samples;
        for (int i = 0; i <= 30; ++i) {
            const double p = 100.0 * i / 30.0;
            samples.emplace_back(p, i == 12 ? std::nullopt : std::optional<double>(40.0 + 0.8 * p));
        }
        const auto r = resample_cycle(slice_from(samples));
        const auto& curve = r.cycle.curve(JointName::left_knee);
        for (int g = 0; g <= 100; ++g) CHECK(std::abs(curve[static_cast<std::size_t>(g)] - (40.0 + 0.8 * g)) < 1e-9);
    }
    SUBCASE("too few knots") {
        const auto r = resample_cycle(slice_from({{0.0, 90.0}, {50.0, 95.0}, {100.0, 90.0}}));
        CHECK_FALSE(r.cycle.valid(JointName::left_knee));
        CHECK(r.warnings.size() == 1);
    }
    SUBCASE("missing edge invalidates instead of extrapolating") {
        std::vector<std::pair<double, std::optional<double>>> samples;
        for (int i = 0; i <= 20; ++i) samples.emplace_back(5.0 * i, i >= 19 ? std::nullopt : std::optional<double>(90.0));
        CHECK_FALSE(resample_cycle(slice_from(samples)).cycle.valid(JointName::left_knee));
    }
    SUBCASE("overshoot is clamped with a warning") {
        std::vector<std::pair<double, std::optional<double>>> samples{
            {0.0, 179.0}, {10.0, 179.5}, {20.0, 180.0}, {30.0, 100.0}, {100.0, 100.0}};
        const auto r = resample_cycle(slice_from(samples));
        REQUIRE(r.cycle.valid(JointName::left_knee));
        for (const double v : r.cycle.curve(JointName::left_knee)) {
            CHECK(v >= 0.0);
            CHECK(v <= 180.0);
        }
        CHECK_FALSE(r.warnings.empty());
    }
    SUBCASE("grid size follows options") {
        std::vector<std::pair<double, std::optional<double>>> samples;
        for (int p = 0; p <= 100; p += 10) samples.emplace_back(p, 120.0);
        ResampleOptions opts;
        opts.grid_points = 51;
        CHECK(resample_cycle(slice_from(samples), opts).cycle.curve(JointName::left_knee).size() == 51);
    }
}
