#include "gaitnorm/pipeline.hpp"

#include <fmt/format.h>

#include "gaitnorm/figures.hpp"

namespace gaitnorm {

namespace fs = std::filesystem;
using nlohmann::json;

void CliConfig::validate() const {
    if (grid_points < 2) throw ValidationError("grid_points must be at least 2");
    detection.validate();
    if (!(min_visibility >= 0.0 && min_visibility <= 1.0)) {
        throw ValidationError("min_visibility must lie in [0, 1]");
    }
}

void CliConfig::apply_json(const json& j) {
    if (!j.is_object()) throw ValidationError("config: expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "grid_points") {
                grid_points = value.get<int>();
            } else if (key == "k") {
                detection.k = value.get<double>();
            } else if (key == "sigma_floor_deg") {
                detection.sigma_floor_deg = value.get<double>();
            } else if (key == "severity_clip") {
                detection.severity_clip = value.get<double>();
            } else if (key == "min_visibility") {
                min_visibility = value.get<double>();
            } else if (key == "seed") {
                seed = value.get<std::uint64_t>();
            } else if (key == "strict") {
                strict = value.get<bool>();
            } else if (key == "phase_mode") {
                const auto s = value.get<std::string>();
                if (s == "frame_index") {
                    phase_mode = PhaseMode::frame_index;
                } else if (s == "timestamp") {
                    phase_mode = PhaseMode::timestamp;
                } else {
                    throw ValidationError("config: phase_mode must be frame_index or timestamp");
                }
            } else if (key == "std_kind") {
                const auto kind = std_kind_from_string(value.get<std::string>());
                if (!kind) throw ValidationError("config: std_kind must be sample or population");
                std_kind = *kind;
            } else {
                throw ValidationError(fmt::format("config: unknown key \"{}\"", key));
            }
        } catch (const json::exception& e) {
            throw ValidationError(fmt::format("config: bad value for \"{}\": {}", key, e.what()));
        }
    }
    validate();
}

NormalizeResult normalize_cycles(const AngleSeriesMap& series, const std::vector<CycleAnnotation>& annotations,
                                 const std::string& video_id, const CliConfig& cfg) {
    NormalizeResult result;
    ResampleOptions options;
    options.grid_points = cfg.grid_points;
    for (const auto& slice : segment_cycles(series, annotations, video_id, cfg.phase_mode)) {
        auto r = resample_cycle(slice, options);
        result.cycles.push_back(std::move(r.cycle));
        result.warnings.insert(result.warnings.end(), r.warnings.begin(), r.warnings.end());
    }
    return result;
}

std::string figure_file_name(const std::string& video_id, const std::string& kind,
                             std::optional<JointName> joint) {
    if (joint) return fmt::format("{}.{}.{}.svg", video_id, kind, to_string(*joint));
    return fmt::format("{}.{}.svg", video_id, kind);
}

namespace {

void write_figure(const FigureDoc& doc, const fs::path& svg_path, std::vector<fs::path>& written) {
    write_text_file(svg_path, doc.svg);
    fs::path sidecar = svg_path;
    sidecar.replace_extension(".json");
    write_text_file(sidecar, dump_json(doc.sidecar));
    written.push_back(svg_path);
    written.push_back(sidecar);
}

}  // namespace

std::vector<fs::path> write_model_figures(const NormativeModel& model, const std::string& video_id,
                                          const fs::path& out_dir, const DetectionConfig& cfg) {
    std::vector<fs::path> written;
    for (const JointName joint : kJointDisplayOrder) {
        if (!model.joints.contains(joint)) continue;
        write_figure(render_band_plot(model, joint, std::nullopt, cfg),
                     out_dir / figure_file_name(video_id, "norm-band", joint), written);
    }
    return written;
}

std::vector<fs::path> write_report_figures(const NormativeModel& model, const std::vector<DeviationReport>& reports,
                                           const fs::path& out_dir) {
    std::vector<fs::path> written;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& report = reports[k];
        const std::string prefix = fmt::format("cycle{}", k);
        for (const auto& [joint, dev] : report.joints) {
            if (!model.joints.contains(joint) || dev.angle.empty()) continue;
            write_figure(render_band_plot(model, joint, BandOverlay{dev.angle, dev.flag}, report.config),
                         out_dir / figure_file_name(report.video_id, prefix + "-band", joint), written);
        }
        write_figure(render_multi_joint(model, report),
                     out_dir / figure_file_name(report.video_id, prefix + "-multi"), written);
        const SeverityMatrix matrix = severity_matrix(report.z(), report.config);
        if (matrix.grid_points > 0) {
            write_figure(render_heatmap(matrix, fmt::format("Deviation severity: {}", report.cycle_id)),
                         out_dir / figure_file_name(report.video_id, prefix + "-heatmap"), written);
        }
    }
    return written;
}

json reports_to_json(const std::vector<DeviationReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    return arr;
}

std::vector<DeviationReport> reports_from_json(const json& j) {
    std::vector<DeviationReport> out;
    if (j.is_object()) {
        out.push_back(report_from_json(j));
        return out;
    }
    if (!j.is_array()) throw ValidationError("reports: expected an array of report objects");
    for (const auto& r : j) out.push_back(report_from_json(r));
    return out;
}

RunSummary run_pipeline(const RunInputs& inputs, const CliConfig& cfg) {
    cfg.validate();
    if (inputs.model.has_value() == inputs.cohort.has_value()) {
        throw ValidationError("run: give exactly one of a model file or a cohort file");
    }
    RunSummary summary;
    auto& warn = summary.warnings;

    const AnnotationSet annotations = parse_cycle_annotations(read_text_file(inputs.annotations));
    std::string video_id = inputs.video_id;
    if (video_id.empty()) video_id = annotations.video_id;
    if (video_id.empty()) video_id = inputs.keypoints.stem().stem().string();

    ParseOptions parse_options;
    parse_options.strict = cfg.strict;
    parse_options.video_id = video_id;
    auto parsed = parse_pose_sequence(read_text_file(inputs.keypoints), parse_options);
    warn.insert(warn.end(), parsed.warnings.begin(), parsed.warnings.end());
    const PoseSequence& seq = parsed.sequence;
    validate_annotations(annotations.cycles, seq);

    const AngleSeriesMap series = all_angle_series(seq, cfg.min_visibility);
    auto normalized = normalize_cycles(series, annotations.cycles, video_id, cfg);
    warn.insert(warn.end(), normalized.warnings.begin(), normalized.warnings.end());

    NormativeModel model;
    if (inputs.model) {
        model = load_norm_model(read_text_file(*inputs.model));
    } else {
        const auto cohort = cycles_from_json(parse_json(read_text_file(*inputs.cohort), "cohort"));
        auto built = build_normative_model(cohort, cfg.grid_points, cfg.std_kind);
        warn.insert(warn.end(), built.warnings.begin(), built.warnings.end());
        model = std::move(built.model);
        const fs::path model_path = inputs.out_dir / "model.json";
        write_text_file(model_path, save_norm_model(model));
        summary.written.push_back(model_path);
    }

    const auto write_doc = [&](const std::string& name, const std::string& content) {
        const fs::path p = inputs.out_dir / name;
        write_text_file(p, content);
        summary.written.push_back(p);
    };
    write_doc(video_id + ".angles.json", dump_json(angles_to_json(video_id, series, cfg.min_visibility)));
    write_doc(video_id + ".cycles.json", dump_json(cycles_to_json(normalized.cycles)));

    std::vector<DeviationReport> reports;
    std::vector<CycleFlags> flags;
    for (std::size_t k = 0; k < normalized.cycles.size(); ++k) {
        const auto& ann = annotations.cycles[k];
        reports.push_back(analyze_cycle(normalized.cycles[k], model, cfg.detection, video_id, ann));
        flags.push_back({ann, normalized.cycles[k].grid_points, reports.back().flags()});
    }
    write_doc(video_id + ".reports.json", dump_json(reports_to_json(reports)));

    for (auto& p : write_model_figures(model, video_id, inputs.out_dir, cfg.detection)) {
        summary.written.push_back(std::move(p));
    }
    for (auto& p : write_report_figures(model, reports, inputs.out_dir)) summary.written.push_back(std::move(p));

    const auto statuses =
        frame_statuses(flags, seq.frames.front().frame_index, seq.frames.back().frame_index);
    write_doc(video_id + ".overlay.jsonl", overlay_to_jsonl(annotate_frames(seq, statuses)));
    return summary;
}

}  // namespace gaitnorm
