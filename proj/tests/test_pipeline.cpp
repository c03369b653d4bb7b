#include <filesystem>

#include "doctest.h"
#include "gaitnorm/pipeline.hpp"
#include "gaitnorm/synth.hpp"

using namespace gaitnorm;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("gaitnorm_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Fixture {
    fs::path dir, keypoints, annotations, cohort;
};

Fixture write_fixture(const std::string& name) {
    Fixture fx{fresh_dir(name), {}, {}, {}};
    const auto profiles = demo_profiles(2.0);
    auto walk_cycles = generate_cohort(profiles, 2, 900);
    walk_cycles[1] = inject_abnormality(walk_cycles[1],
                                        {JointName::right_knee, 30, 60, AbnormalityKind::offset, 25.0, {}});
    const auto walk = synthesize_walk(walk_cycles, "clip", {41, 2, 30.0, 0.95, 4.0});
    fx.keypoints = fx.dir / "clip.keypoints.jsonl";
    fx.annotations = fx.dir / "clip.cycles.json";
    fx.cohort = fx.dir / "cohort.json";
    write_text_file(fx.keypoints, write_pose_sequence(walk.sequence));
    write_text_file(fx.annotations, write_cycle_annotations({"clip", walk.annotations}));
    write_text_file(fx.cohort, dump_json(cycles_to_json(generate_cohort(profiles, 40, 1))));
    return fx;
}

}  // namespace

TEST_CASE("CliConfig from JSON") {
    CliConfig cfg;
    cfg.apply_json(nlohmann::json{{"k", 2.0}, {"std_kind", "population"}, {"phase_mode", "timestamp"}, {"seed", 9}});
    CHECK(cfg.detection.k == 2.0);
    CHECK(cfg.std_kind == StdKind::population);
    CHECK(cfg.phase_mode == PhaseMode::timestamp);
    CHECK(cfg.seed == 9);
    CHECK(cfg.grid_points == 101);

    CliConfig other;
    CHECK_THROWS_AS(other.apply_json(nlohmann::json{{"kk", 1.0}}), ValidationError);
    CHECK_THROWS_AS(other.apply_json(nlohmann::json{{"k", "big"}}), ValidationError);
    CHECK_THROWS_AS(other.apply_json(nlohmann::json{{"k", -1.0}}), ValidationError);
    CHECK_THROWS_AS(other.apply_json(nlohmann::json{{"min_visibility", 1.5}}), ValidationError);
    CHECK_THROWS_AS(other.apply_json(nlohmann::json::array()), ValidationError);
}

TEST_CASE("figure file names") {
    CHECK(figure_file_name("clip", "norm-band", JointName::left_knee) == "clip.norm-band.left_knee.svg");
    CHECK(figure_file_name("clip", "cycle0-heatmap") == "clip.cycle0-heatmap.svg");
}

TEST_CASE("run_pipeline end to end") {
    const auto fx = write_fixture("run");
    RunInputs inputs;
    inputs.keypoints = fx.keypoints;
    inputs.annotations = fx.annotations;
    inputs.cohort = fx.cohort;
    inputs.out_dir = fx.dir / "out";
    const auto summary = run_pipeline(inputs, CliConfig{});

    for (const auto& p : summary.written) CHECK(fs::exists(p));
    const auto out = inputs.out_dir;
    CHECK(fs::exists(out / "model.json"));
    CHECK(fs::exists(out / "clip.overlay.jsonl"));
    CHECK(fs::exists(out / "clip.norm-band.left_knee.svg"));
    CHECK(fs::exists(out / "clip.norm-band.left_knee.json"));
    CHECK(fs::exists(out / "clip.cycle1-multi.svg"));
    CHECK(fs::exists(out / "clip.cycle1-heatmap.svg"));

    const auto reports = reports_from_json(parse_json(read_text_file(out / "clip.reports.json"), "reports"));
    REQUIRE(reports.size() == 2);
    const auto& knee = reports[1].joints.at(JointName::right_knee);
    int inside = 0;
    for (int g = 32; g <= 58; ++g) inside += knee.flag[static_cast<std::size_t>(g)] ? 1 : 0;
    CHECK(inside >= 20);

    // A second run from the saved model is byte-identical apart from the model file.
    RunInputs again = inputs;
    again.cohort.reset();
    again.model = out / "model.json";
    again.out_dir = fx.dir / "out2";
    run_pipeline(again, CliConfig{});
    for (const auto& entry : fs::directory_iterator(again.out_dir)) {
        CHECK(read_text_file(entry.path()) == read_text_file(out / entry.path().filename()));
    }

    RunInputs both = inputs;
    both.model = out / "model.json";
    CHECK_THROWS_AS(run_pipeline(both, CliConfig{}), ValidationError);

    RunInputs missing = inputs;
    missing.keypoints = fx.dir / "nope.jsonl";
    CHECK_THROWS_AS(run_pipeline(missing, CliConfig{}), IoError);
}
