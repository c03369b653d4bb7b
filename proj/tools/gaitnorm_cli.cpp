// gaitnorm: joint-angle gait kinematics, normative bands and deviation
// detection from 2D pose keypoints.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gaitnorm/detect.hpp"
#include "gaitnorm/figures.hpp"
#include "gaitnorm/pipeline.hpp"
#include "gaitnorm/pose_io.hpp"
#include "gaitnorm/synth.hpp"

namespace fs = std::filesystem;
using namespace gaitnorm;

namespace {

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void report_written(const std::vector<fs::path>& paths) {
    for (const auto& p : paths) std::cout << p.string() << "\n";
}

// "left_knee:30:60:offset:6"
AbnormalitySpec parse_injection(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 5) throw ValidationError("--inject expects joint:start:end:kind:magnitude");
    AbnormalitySpec spec;
    const auto joint = joint_from_string(parts[0]);
    const auto kind = abnormality_kind_from_string(parts[3]);
    if (!joint) throw ValidationError("--inject: unknown joint " + parts[0]);
    if (!kind) throw ValidationError("--inject: unknown kind " + parts[3]);
    spec.joint = *joint;
    spec.kind = *kind;
    try {
        spec.start_percent = std::stod(parts[1]);
        spec.end_percent = std::stod(parts[2]);
        spec.magnitude = std::stod(parts[4]);
    } catch (const std::exception&) {
        throw ValidationError("--inject: start, end and magnitude must be numbers");
    }
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gait kinematics, normative bands and deviation detection from 2D pose keypoints"};
    app.require_subcommand(1);

    CliConfig cfg;
    std::string config_path;
    std::string phase_mode = "frame_index";
    std::string std_kind = "sample";
    app.add_option("--config", config_path,
                   fmt::format("JSON config file; overrides flags (default: ${})", kConfigEnvVar));
    app.add_option("--grid-points", cfg.grid_points, "Phase grid size")->capture_default_str();
    app.add_option("--k", cfg.detection.k, "Band half-width in SD units")->capture_default_str();
    app.add_option("--sigma-floor", cfg.detection.sigma_floor_deg, "Lower bound on SD (deg)")->capture_default_str();
    app.add_option("--severity-clip", cfg.detection.severity_clip, "|z| at which shading saturates")
        ->capture_default_str();
    app.add_option("--min-visibility", cfg.min_visibility, "Keypoint visibility threshold")->capture_default_str();
    app.add_option("--seed", cfg.seed, "RNG seed for synth")->capture_default_str();
    app.add_flag("--strict", cfg.strict, "Reject unknown keypoint names");
    app.add_option("--phase-mode", phase_mode, "frame_index or timestamp")
        ->check(CLI::IsMember({"frame_index", "timestamp"}))
        ->capture_default_str();
    app.add_option("--std-kind", std_kind, "sample or population")
        ->check(CLI::IsMember({"sample", "population"}))
        ->capture_default_str();

    // angles
    auto* angles = app.add_subcommand("angles", "Keypoints → per-frame joint angle series");
    std::string keypoints_path, out_path, video_id;
    angles->add_option("--keypoints", keypoints_path, "Keypoint JSONL file")->required();
    angles->add_option("--out", out_path, "Output angles JSON")->required();
    angles->add_option("--video-id", video_id, "Video identifier (default: file stem)");

    // segment
    auto* segment = app.add_subcommand("segment", "Angle series + annotations → normalized cycles");
    std::string angles_path, annotations_path;
    segment->add_option("--angles", angles_path, "Angles JSON from `angles`")->required();
    segment->add_option("--annotations", annotations_path, "Cycle annotation JSON")->required();
    segment->add_option("--out", out_path, "Output cycles JSON")->required();

    // build-norm
    auto* build = app.add_subcommand("build-norm", "Typical cycles → normative model");
    std::vector<std::string> cycles_paths;
    bool skip_atypical = false;
    build->add_option("--cycles", cycles_paths, "Cycles JSON file(s)")->required();
    build->add_option("--out", out_path, "Output model JSON")->required();
    build->add_flag("--skip-atypical", skip_atypical, "Drop atypical cycles instead of failing");

    // detect
    auto* detect = app.add_subcommand("detect", "Cycles + model → deviation reports");
    std::string model_path;
    detect->add_option("--cycles", cycles_paths, "Cycles JSON file")->required();
    detect->add_option("--model", model_path, "Normative model JSON")->required();
    detect->add_option("--out", out_path, "Output reports JSON")->required();
    detect->add_option("--video-id", video_id, "Video identifier written into reports");

    // figures
    auto* figures = app.add_subcommand("figures", "Model (+ reports) → SVG figures with sidecars");
    std::string reports_path, out_dir;
    figures->add_option("--model", model_path, "Normative model JSON")->required();
    figures->add_option("--reports", reports_path, "Reports JSON from `detect`");
    figures->add_option("--out-dir", out_dir, "Output directory")->required();
    figures->add_option("--video-id", video_id, "Prefix for model-only figures (default: model)");

    // synth
    auto* synth = app.add_subcommand("synth", "Synthetic cohorts and walks with known ground truth");
    synth->require_subcommand(1);
    auto* synth_cohort = synth->add_subcommand("cohort", "Normalized typical cycles");
    int n_cycles = 351;
    double noise_sd = 2.0;
    synth_cohort->add_option("--n", n_cycles, "Number of cycles")->capture_default_str();
    synth_cohort->add_option("--noise-sd", noise_sd, "Per-sample noise SD (deg)")->capture_default_str();
    synth_cohort->add_option("--out", out_path, "Output cycles JSON")->required();
    auto* synth_walk = synth->add_subcommand("walk", "Keypoint sequence + annotations");
    int walk_cycles = 3, frames_per_cycle = 41;
    std::vector<std::string> injections;
    synth_walk->add_option("--cycles", walk_cycles, "Number of gait cycles")->capture_default_str();
    synth_walk->add_option("--frames-per-cycle", frames_per_cycle, "Frames per cycle, inclusive")
        ->capture_default_str();
    synth_walk->add_option("--noise-sd", noise_sd, "Per-sample noise SD (deg)")->capture_default_str();
    synth_walk->add_option("--inject", injections, "joint:start:end:kind:magnitude (marks cycles atypical)");
    synth_walk->add_option("--video-id", video_id, "Video identifier (default: synthetic_walk)");
    synth_walk->add_option("--out-dir", out_dir, "Output directory")->required();

    // run
    auto* run = app.add_subcommand("run", "End to end: keypoints → reports, figures, overlays");
    std::string cohort_path;
    run->add_option("--keypoints", keypoints_path, "Keypoint JSONL file")->required();
    run->add_option("--annotations", annotations_path, "Cycle annotation JSON")->required();
    auto* run_model = run->add_option("--model", model_path, "Existing normative model");
    auto* run_cohort = run->add_option("--cohort", cohort_path, "Typical cycles to build the model from");
    run_model->excludes(run_cohort);
    run->add_option("--out-dir", out_dir, "Output directory")->required();
    run->add_option("--video-id", video_id, "Video identifier");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        cfg.phase_mode = phase_mode == "timestamp" ? PhaseMode::timestamp : PhaseMode::frame_index;
        cfg.std_kind = std_kind == "population" ? StdKind::population : StdKind::sample;
        if (config_path.empty()) {
            if (const char* env = std::getenv(kConfigEnvVar); env && *env) config_path = env;
        }
        if (!config_path.empty()) cfg.apply_json(parse_json(read_text_file(config_path), "config"));
        cfg.validate();

        if (*angles) {
            ParseOptions options;
            options.strict = cfg.strict;
            options.video_id = video_id.empty() ? fs::path(keypoints_path).stem().stem().string() : video_id;
            auto parsed = parse_pose_sequence(read_text_file(keypoints_path), options);
            print_warnings(parsed.warnings);
            const auto series = all_angle_series(parsed.sequence, cfg.min_visibility);
            write_text_file(out_path,
                            dump_json(angles_to_json(options.video_id, series, cfg.min_visibility)));
        } else if (*segment) {
            const auto angles_doc = parse_json(read_text_file(angles_path), "angles");
            const auto series = angles_from_json(angles_doc);
            const auto ann = parse_cycle_annotations(read_text_file(annotations_path));
            std::string vid = ann.video_id;
            if (vid.empty() && angles_doc.contains("video_id")) vid = angles_doc["video_id"].get<std::string>();
            auto result = normalize_cycles(series, ann.cycles, vid, cfg);
            print_warnings(result.warnings);
            write_text_file(out_path, dump_json(cycles_to_json(result.cycles)));
        } else if (*build) {
            std::vector<NormalizedCycle> cohort;
            for (const auto& p : cycles_paths) {
                for (auto& c : cycles_from_json(parse_json(read_text_file(p), p))) {
                    if (skip_atypical && c.label == CycleLabel::atypical) {
                        std::cerr << "warning: skipped atypical cycle " << c.id << "\n";
                        continue;
                    }
                    cohort.push_back(std::move(c));
                }
            }
            auto built = build_normative_model(cohort, cfg.grid_points, cfg.std_kind);
            print_warnings(built.warnings);
            write_text_file(out_path, save_norm_model(built.model));
            const auto summary = model_summary(built.model);
            std::cout << fmt::format("model: {} joints, {} cycles\n", summary.joints.size(), summary.total_cycles);
        } else if (*detect) {
            if (cycles_paths.size() != 1) throw ValidationError("detect takes exactly one --cycles file");
            const auto model = load_norm_model(read_text_file(model_path));
            const auto cycles = cycles_from_json(parse_json(read_text_file(cycles_paths[0]), "cycles"));
            std::vector<DeviationReport> reports;
            for (const auto& c : cycles) reports.push_back(analyze_cycle(c, model, cfg.detection, video_id));
            write_text_file(out_path, dump_json(reports_to_json(reports)));
        } else if (*figures) {
            const auto model = load_norm_model(read_text_file(model_path));
            auto written = write_model_figures(model, video_id, out_dir, cfg.detection);
            if (!reports_path.empty()) {
                const auto reports = reports_from_json(parse_json(read_text_file(reports_path), "reports"));
                for (auto& p : write_report_figures(model, reports, out_dir)) written.push_back(std::move(p));
            }
            report_written(written);
        } else if (*synth_cohort) {
            const auto cohort = generate_cohort(demo_profiles(noise_sd), n_cycles, cfg.seed, cfg.grid_points);
            write_text_file(out_path, dump_json(cycles_to_json(cohort)));
        } else if (*synth_walk) {
            auto cycles = generate_cohort(demo_profiles(noise_sd), walk_cycles, cfg.seed, cfg.grid_points);
            for (const auto& text : injections) {
                const auto spec = parse_injection(text);
                for (auto& c : cycles) {
                    c = inject_abnormality(c, spec);
                    c.label = CycleLabel::atypical;
                }
            }
            WalkOptions options;
            options.cycles = walk_cycles;
            options.frames_per_cycle = frames_per_cycle;
            const auto walk = synthesize_walk(cycles, video_id, options);
            const fs::path dir(out_dir);
            write_text_file(dir / (video_id + ".keypoints.jsonl"), write_pose_sequence(walk.sequence));
            write_text_file(dir / (video_id + ".cycles.json"),
                            write_cycle_annotations({video_id, walk.annotations}));
        } else if (*run) {
            RunInputs inputs;
            inputs.keypoints = keypoints_path;
            inputs.annotations = annotations_path;
            if (!model_path.empty()) inputs.model = model_path;
            if (!cohort_path.empty()) inputs.cohort = cohort_path;
            inputs.out_dir = out_dir;
            inputs.video_id = video_id;
            const auto summary = run_pipeline(inputs, cfg);
            print_warnings(summary.warnings);
            report_written(summary.written);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
