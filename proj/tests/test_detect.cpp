#include <cmath>
#include <random>

#include "doctest.h"
#include "gaitnorm/detect.hpp"

using namespace gaitnorm;

namespace {

NormativeModel flat_model(double mean, double sd, int grid = 101) {
    NormativeModel m;
    m.grid_points = grid;
    for (const JointName j : kJointDisplayOrder) {
        m.joints[j] = {std::vector<double>(static_cast<std::size_t>(grid), mean),
                       std::vector<double>(static_cast<std::size_t>(grid), sd), 10, {}};
    }
    return m;
}

NormalizedCycle flat_cycle(double value, int grid = 101) {
    NormalizedCycle c;
    c.id = "c";
    c.grid_points = grid;
    for (const JointName j : kJointDisplayOrder) c.set_curve(j, std::vector<double>(static_cast<std::size_t>(grid), value));
    return c;
}

}  // namespace

TEST_CASE("z_scores examples") {
    CHECK(z_scores_for_joint(flat_cycle(66.0), flat_model(60.0, 5.0), JointName::left_knee)[0] ==
          doctest::Approx(1.2));
    for (const auto& [joint, z] : z_scores(flat_cycle(60.0), flat_model(60.0, 5.0))) {
        for (const double v : z) CHECK(v == 0.0);
    }
    // SD below the floor: divisor is 0.5.
    CHECK(z_scores_for_joint(flat_cycle(61.0), flat_model(60.0, 0.0), JointName::left_knee)[7] ==
          doctest::Approx(2.0));
}

TEST_CASE("z_scores errors and unknown joints") {
    CHECK_THROWS_AS(z_scores(flat_cycle(60.0, 51), flat_model(60.0, 5.0)), ValidationError);
    auto model = flat_model(60.0, 5.0);
    model.joints.erase(JointName::right_elbow);
    CHECK_THROWS_AS(z_scores_for_joint(flat_cycle(60.0), model, JointName::right_elbow), ValidationError);
    const auto z = z_scores(flat_cycle(60.0), model);
    CHECK(z.size() == 9);
    CHECK_FALSE(z.contains(JointName::right_elbow));

    auto cycle = flat_cycle(60.0);
    cycle.angles[index_of(JointName::left_hip)].reset();
    const auto report = analyze_cycle(cycle, model);
    CHECK(report.joints.size() == 8);
    CHECK(report.unknown_joints == std::vector<JointName>{JointName::left_hip, JointName::right_elbow});
}

TEST_CASE("flag_abnormal uses a strict inequality") {
    const JointSeries z{{JointName::left_knee, {1.2, 0.8, 1.0, -1.0, -1.0000001}}};
    const auto flags = flag_abnormal(z).at(JointName::left_knee);
    CHECK(flags == std::vector<bool>{true, false, false, false, true});
    DetectionConfig wide;
    wide.k = 2.0;
    CHECK(flag_abnormal(z, wide).at(JointName::left_knee) == std::vector<bool>(5, false));
}

TEST_CASE("DetectionConfig validation") {
    DetectionConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.k = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.sigma_floor_deg = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.severity_clip = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("severity matrix") {
    SUBCASE("zero z") {
        JointSeries z;
        for (const JointName j : kJointDisplayOrder) z[j] = std::vector<double>(101, 0.0);
        const auto m = severity_matrix(z);
        CHECK(m.row_count() == 10);
        CHECK(m.grid_points == 101);
        for (const auto& row : m.rows) {
            REQUIRE(row.has_value());
            for (const double v : *row) CHECK(v == 0.0);
        }
    }
    SUBCASE("clip boundary and sign symmetry") {
        CHECK(severity(3.0) == 1.0);
        CHECK(severity(-3.0) == 1.0);
        CHECK(severity(7.0) == 1.0);
        CHECK(severity(1.5) == doctest::Approx(0.5));
        CHECK(severity(-1.5) == severity(1.5));
    }
    SUBCASE("mismatched grids") {
        const JointSeries z{{JointName::left_knee, std::vector<double>(101, 0.0)},
                            {JointName::right_knee, std::vector<double>(51, 0.0)}};
        CHECK_THROWS_AS(severity_matrix(z), ValidationError);
    }
}

TEST_CASE("threshold consistency and monotonicity over random triples") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> angle(0.0, 180.0), sd(0.0, 10.0), kdist(0.2, 3.0);
    for (int i = 0; i < 500; ++i) {
        DetectionConfig cfg;
        cfg.k = kdist(rng);
        const double mean = angle(rng), s = sd(rng);
        NormativeModel model;
        model.grid_points = 101;
        model.joints[JointName::left_knee] = {std::vector<double>(101, mean), std::vector<double>(101, s), 5, {}};
        NormalizedCycle cycle;
        cycle.grid_points = 101;
        std::vector<double> values(101);
        for (auto& v : values) v = angle(rng);
        cycle.set_curve(JointName::left_knee, values);
        const auto report = analyze_cycle(cycle, model, cfg);
        const auto& dev = report.joints.at(JointName::left_knee);
        for (std::size_t g = 0; g < 101; ++g) {
            CHECK(dev.flag[g] == (std::abs(values[g] - mean) > cfg.k * std::max(s, cfg.sigma_floor_deg)));
            CHECK(dev.severity[g] == doctest::Approx(std::min(std::abs(dev.z[g]), 3.0) / 3.0));
        }
        // Pushing every sample further from the mean never lowers |z| or severity.
        auto further = values;
        for (auto& v : further) v = v >= mean ? v + 1.0 : v - 1.0;
        cycle.set_curve(JointName::left_knee, further);
        const auto pushed = analyze_cycle(cycle, model, cfg).joints.at(JointName::left_knee);
        for (std::size_t g = 0; g < 101; ++g) {
            CHECK(std::abs(pushed.z[g]) >= std::abs(dev.z[g]));
            CHECK(pushed.severity[g] >= dev.severity[g]);
        }
    }
}

TEST_CASE("frame_statuses") {
    JointFlags flags;
    std::vector<bool> knee(101, false);
    for (int g = 30; g <= 60; ++g) knee[static_cast<std::size_t>(g)] = true;
    flags[JointName::left_knee] = knee;
    flags[JointName::left_hip] = std::vector<bool>(101, false);
    // 1000 frames per cycle: frame 100 + 10p sits at p%.
    const std::vector<CycleFlags> cycles{{{100, 1100, CycleLabel::typical}, 101, flags}};
    const auto statuses = frame_statuses(cycles, 0, 1200);
    REQUIRE(statuses.size() == 1201);

    CHECK(statuses[50].at(JointName::left_knee) == JointStatus::unknown);
    for (const JointName j : kJointDisplayOrder) CHECK(statuses[99].at(j) == JointStatus::unknown);
    CHECK(statuses[1150].at(JointName::left_hip) == JointStatus::unknown);

    // frame 604 → 50.4% → grid 50
    CHECK(statuses[604].at(JointName::left_knee) == JointStatus::abnormal);
    CHECK(statuses[604].at(JointName::left_hip) == JointStatus::normal);
    CHECK(statuses[604].at(JointName::right_knee) == JointStatus::unknown);
    // 29.4% → grid 29 (normal); 29.6% → grid 30 (abnormal)
    CHECK(statuses[394].at(JointName::left_knee) == JointStatus::normal);
    CHECK(statuses[396].at(JointName::left_knee) == JointStatus::abnormal);
    CHECK(statuses[704].at(JointName::left_knee) == JointStatus::abnormal);  // 60.4%
    CHECK(statuses[706].at(JointName::left_knee) == JointStatus::normal);    // 60.6%
}

TEST_CASE("frame_statuses shared boundary takes the later cycle") {
    JointFlags first{{JointName::left_knee, std::vector<bool>(101, true)}};
    JointFlags second{{JointName::left_knee, std::vector<bool>(101, false)}};
    const std::vector<CycleFlags> cycles{{{50, 100, CycleLabel::typical}, 101, second},
                                         {{0, 50, CycleLabel::typical}, 101, first}};
    const auto statuses = frame_statuses(cycles, 0, 100);
    CHECK(statuses[49].at(JointName::left_knee) == JointStatus::abnormal);
    CHECK(statuses[50].at(JointName::left_knee) == JointStatus::normal);
}
