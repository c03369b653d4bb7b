#include <random>

#include "doctest.h"
#include "gaitnorm/pose_io.hpp"
#include "gaitnorm/synth.hpp"

using namespace gaitnorm;

namespace {

const char* kTwoFrames =
    R"({"frame": 0, "time_s": 0.0, "keypoints": {"left_hip": [10, 20, 0.9], "left_knee": [12, 60, 0.8]}})"
    "\n"
    R"({"frame": 1, "keypoints": {"left_hip": [11, 20, 0.9], "left_knee": [0, 0, 1.0]}})"
    "\n";

}  // namespace

TEST_CASE("parse_pose_sequence") {
    SUBCASE("two well-formed frames") {
        const auto r = parse_pose_sequence(std::string_view(kTwoFrames), {false, "vid", 30.0});
        const auto& seq = r.sequence;
        REQUIRE(seq.frames.size() == 2);
        CHECK(seq.video_id == "vid");
        CHECK(*seq.frames[0].time_s == 0.0);
        CHECK_FALSE(seq.frames[1].time_s.has_value());
        CHECK(seq.frames[0].at(Keypoint::left_knee)->position == Point2D{12, 60});
        CHECK(seq.frames[1].at(Keypoint::left_knee)->position == Point2D{0, 0});  // (0,0) is a real pixel
        CHECK_FALSE(seq.frames[0].at(Keypoint::left_ankle).has_value());
        CHECK(r.warnings.empty());
    }
    SUBCASE("visibility out of range") {
        const std::string text =
            R"({"frame": 0, "keypoints": {"left_hip": [1, 2, 1.5]}})"
            "\n"
            R"({"frame": 1, "keypoints": {}})";
        try {
            parse_pose_sequence(std::string_view(text));
            FAIL("expected an error");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("visibility out of range") != std::string::npos);
        }
    }
    SUBCASE("out-of-order frames are sorted with a warning") {
        const std::string text =
            R"({"frame": 3, "keypoints": {}})"
            "\n"
            R"({"frame": 1, "keypoints": {}})";
        const auto r = parse_pose_sequence(std::string_view(text));
        CHECK(r.sequence.frames[0].frame_index == 1);
        CHECK(r.sequence.frames[1].frame_index == 3);
        CHECK(r.warnings.size() == 1);
    }
    SUBCASE("duplicate frame index") {
        const std::string text =
            R"({"frame": 2, "keypoints": {}})"
            "\n"
            R"({"frame": 2, "keypoints": {}})";
        CHECK_THROWS_AS(parse_pose_sequence(std::string_view(text)), ValidationError);
    }
    SUBCASE("unknown names: lenient skips, strict rejects") {
        const std::string text =
            R"({"frame": 0, "keypoints": {"nose": [1, 2, 0.9]}})"
            "\n"
            R"({"frame": 1, "keypoints": {}})";
        const auto r = parse_pose_sequence(std::string_view(text));
        CHECK(r.warnings.size() == 1);
        CHECK_THROWS_AS(parse_pose_sequence(std::string_view(text), {true, "", {}}), ValidationError);
    }
    SUBCASE("malformed records") {
        CHECK_THROWS_AS(parse_pose_sequence(std::string_view("{not json}\n{}")), ValidationError);
        CHECK_THROWS_AS(parse_pose_sequence(std::string_view(R"({"keypoints": {}})")), ValidationError);
        CHECK_THROWS_AS(
            parse_pose_sequence(std::string_view(R"({"frame": 0, "keypoints": {"left_hip": [1, 2]}})")),
            ValidationError);
        CHECK_THROWS_AS(parse_pose_sequence(std::string_view(R"({"frame": 0, "keypoints": {}})")),
                        ValidationError);  // fewer than 2 frames
    }
    SUBCASE("deterministic") {
        CHECK(parse_pose_sequence(std::string_view(kTwoFrames)).sequence ==
              parse_pose_sequence(std::string_view(kTwoFrames)).sequence);
    }
    SUBCASE("writer round trip") {
        const auto walk = synthesize_walk(generate_cohort(demo_profiles(2.0), 1, 4), "w", {});
        const auto text = write_pose_sequence(walk.sequence);
        CHECK(parse_pose_sequence(std::string_view(text), {false, "w", 30.0}).sequence == walk.sequence);
    }
}

TEST_CASE("parse_cycle_annotations") {
    SUBCASE("single cycle") {
        const auto set = parse_cycle_annotations(
            std::string_view(R"({"video_id": "v", "cycles": [{"start_frame": 10, "end_frame": 40, "label": "typical"}]})"));
        CHECK(set.video_id == "v");
        REQUIRE(set.cycles.size() == 1);
        CHECK(set.cycles[0] == CycleAnnotation{10, 40, CycleLabel::typical});
    }
    SUBCASE("shared boundary accepted") {
        const auto set = parse_cycle_annotations(std::string_view(
            R"({"video_id": "v", "cycles": [{"start_frame": 40, "end_frame": 70, "label": "atypical"},
                                           {"start_frame": 10, "end_frame": 40, "label": "typical"}]})"));
        REQUIRE(set.cycles.size() == 2);
        CHECK(set.cycles[0].start_frame == 10);
        CHECK(set.cycles[1].label == CycleLabel::atypical);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(parse_cycle_annotations(std::string_view(
                            R"({"cycles": [{"start_frame": 40, "end_frame": 10, "label": "typical"}]})")),
                        ValidationError);
        CHECK_THROWS_AS(parse_cycle_annotations(std::string_view(
                            R"({"cycles": [{"start_frame": 10, "end_frame": 40, "label": "limping"}]})")),
                        ValidationError);
        CHECK_THROWS_AS(parse_cycle_annotations(std::string_view(
                            R"({"cycles": [{"start_frame": 10, "end_frame": 40, "label": "typical"},
                                           {"start_frame": 30, "end_frame": 60, "label": "typical"}]})")),
                        ValidationError);
        CHECK_THROWS_AS(parse_cycle_annotations(std::string_view("[1, 2]")), ValidationError);
    }
    SUBCASE("validated against a sequence") {
        PoseSequence seq;
        for (int i = 0; i < 20; ++i) seq.frames.push_back(KeypointFrame{i, std::nullopt, {}});
        CHECK_NOTHROW(validate_annotations({{0, 19, CycleLabel::typical}}, seq));
        CHECK_THROWS_AS(validate_annotations({{10, 40, CycleLabel::typical}}, seq), ValidationError);
    }
}

TEST_CASE("normative model file") {
    const auto model = build_normative_model(generate_cohort(demo_profiles(2.0), 12, 40)).model;
    REQUIRE(model.joints.size() == 10);

    SUBCASE("round trip is exact") {
        const auto text = save_norm_model(model);
        const auto loaded = load_norm_model(text);
        CHECK(loaded == model);
        CHECK(save_norm_model(loaded) == text);
    }
    SUBCASE("round trip on awkward doubles") {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        NormativeModel m;
        m.std_kind = StdKind::population;
        JointNorm norm;
        for (int g = 0; g < 101; ++g) {
            norm.mean.push_back(180.0 * u(rng));
            norm.std.push_back(u(rng) * 1e-7);
        }
        norm.mean[0] = 0.1 + 0.2;
        norm.mean[1] = 180.0;
        norm.mean[2] = 5e-324;
        norm.n_cycles = 1;
        m.joints[JointName::right_hip] = norm;
        CHECK(load_norm_model(save_norm_model(m)) == m);
    }
    SUBCASE("schema violations") {
        auto j = model_to_json(model);
        j["joints"]["left_knee"]["mean"].erase(0);
        CHECK_THROWS_AS(model_from_json(j), ValidationError);

        j = model_to_json(model);
        j["joints"]["left_knee"]["std"][5] = -0.1;
        CHECK_THROWS_AS(model_from_json(j), ValidationError);

        j = model_to_json(model);
        j["schema"] = "gaitnorm/2";
        CHECK_THROWS_AS(model_from_json(j), ValidationError);

        j = model_to_json(model);
        j["joints"]["left_pinky"] = j["joints"]["left_knee"];
        CHECK_THROWS_AS(model_from_json(j), ValidationError);

        j = model_to_json(model);
        j["std_kind"] = "robust";
        CHECK_THROWS_AS(model_from_json(j), ValidationError);

        CHECK_THROWS_AS(load_norm_model("{"), ValidationError);
    }
}

TEST_CASE("cycles and reports serialize losslessly") {
    auto cycles = generate_cohort(demo_profiles(2.0), 3, 8);
    cycles[1].angles[index_of(JointName::left_elbow)].reset();
    cycles[2].label = CycleLabel::atypical;
    CHECK(cycles_from_json(parse_json(dump_json(cycles_to_json(cycles)), "cycles")) == cycles);

    auto bad = cycles_to_json(cycles);
    bad[0]["joints"]["left_knee"].erase(3);
    CHECK_THROWS_AS(cycles_from_json(bad), ValidationError);

    const auto model = build_normative_model(generate_cohort(demo_profiles(2.0), 10, 100)).model;
    const auto report = analyze_cycle(cycles[1], model, {}, "vid", CycleAnnotation{0, 40, CycleLabel::typical});
    const auto back = report_from_json(parse_json(dump_json(report_to_json(report)), "report"));
    CHECK(back.video_id == "vid");
    CHECK(back.cycle_id == report.cycle_id);
    CHECK(back.annotation == report.annotation);
    CHECK(back.unknown_joints == report.unknown_joints);
    REQUIRE(back.joints.size() == report.joints.size());
    for (const auto& [joint, dev] : report.joints) {
        CHECK(back.joints.at(joint).z == dev.z);
        CHECK(back.joints.at(joint).flag == dev.flag);
        CHECK(back.joints.at(joint).severity == dev.severity);
        CHECK(back.joints.at(joint).flagged_fraction == dev.flagged_fraction);
    }
    const auto j = report_to_json(report);
    CHECK(j.contains("video_id"));
    CHECK(j["cycle"]["start_frame"] == 0);
    CHECK(j["joints"]["left_knee"].contains("flagged_fraction"));
}

TEST_CASE("angle series serialize losslessly") {
    const auto walk = synthesize_walk(generate_cohort(demo_profiles(2.0), 1, 4), "w", {});
    auto seq = walk.sequence;
    seq.frames[3].at(Keypoint::left_knee)->visibility = 0.1;
    const auto series = all_angle_series(seq);
    const auto back = angles_from_json(parse_json(dump_json(angles_to_json("w", series, 0.5)), "angles"));
    REQUIRE(back.size() == series.size());
    for (const auto& [joint, s] : series) {
        const auto& b = back.at(joint);
        REQUIRE(b.samples.size() == s.samples.size());
        for (std::size_t i = 0; i < s.samples.size(); ++i) {
            CHECK(b.samples[i].frame_index == s.samples[i].frame_index);
            CHECK(b.samples[i].angle_deg == s.samples[i].angle_deg);
            CHECK(b.samples[i].missing_reason == s.samples[i].missing_reason);
        }
    }
}
