#include "gaitnorm/pose_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include <fmt/format.h>

namespace gaitnorm {

using nlohmann::json;

json parse_json(std::string_view text, std::string_view what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(fmt::format("{}: malformed JSON: {}", what, e.what()));
    }
}

std::string dump_json(const json& j) { return j.dump(1) + "\n"; }

namespace {

double finite_number(const json& v, std::string_view what) {
    if (!v.is_number()) throw ValidationError(fmt::format("{}: expected a number", what));
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(fmt::format("{}: non-finite value", what));
    return d;
}

std::int64_t integer(const json& v, std::string_view what) {
    if (!v.is_number_integer()) throw ValidationError(fmt::format("{}: expected an integer", what));
    return v.get<std::int64_t>();
}

const json& member(const json& obj, std::string_view key, std::string_view what) {
    if (!obj.is_object()) throw ValidationError(fmt::format("{}: expected an object", what));
    const auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(fmt::format("{}: missing \"{}\"", what, key));
    return *it;
}

KeypointFrame parse_frame(const std::string& line, std::size_t line_no, const ParseOptions& options,
                          std::vector<std::string>& warnings) {
    const std::string where = fmt::format("line {}", line_no);
    json record;
    try {
        record = json::parse(line);
    } catch (const json::parse_error&) {
        throw ValidationError(fmt::format("{}: malformed record", where));
    }
    if (!record.is_object()) throw ValidationError(fmt::format("{}: malformed record", where));

    KeypointFrame frame;
    frame.frame_index = integer(member(record, "frame", where), where + " frame");
    if (frame.frame_index < 0) throw ValidationError(fmt::format("{}: negative frame index", where));
    if (const auto it = record.find("time_s"); it != record.end() && !it->is_null()) {
        frame.time_s = finite_number(*it, where + " time_s");
    }
    const json& kps = member(record, "keypoints", where);
    if (!kps.is_object()) throw ValidationError(fmt::format("{}: keypoints must be an object", where));
    for (const auto& [name, value] : kps.items()) {
        const auto kp = keypoint_from_string(name);
        if (!kp) {
            if (options.strict) {
                throw ValidationError(fmt::format("{}: unknown keypoint name \"{}\"", where, name));
            }
            warnings.push_back(fmt::format("{}: skipped unknown keypoint \"{}\"", where, name));
            continue;
        }
        if (value.is_null()) continue;
        if (!value.is_array() || value.size() != 3) {
            throw ValidationError(fmt::format("{}: {} must be [x, y, visibility]", where, name));
        }
        const std::string field = where + " " + name;
        Observation obs;
        obs.position.x = finite_number(value[0], field);
        obs.position.y = finite_number(value[1], field);
        obs.visibility = finite_number(value[2], field);
        if (obs.visibility < 0.0 || obs.visibility > 1.0) {
            throw ValidationError(fmt::format("{}: visibility out of range", field));
        }
        frame.at(*kp) = obs;
    }
    return frame;
}

}  // namespace

ParsedSequence parse_pose_sequence(std::istream& in, const ParseOptions& options) {
    ParsedSequence result;
    auto& seq = result.sequence;
    seq.video_id = options.video_id;
    seq.fps = options.fps;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
            continue;
        }
        seq.frames.push_back(parse_frame(line, line_no, options, result.warnings));
    }

    const auto by_index = [](const KeypointFrame& a, const KeypointFrame& b) {
        return a.frame_index < b.frame_index;
    };
    if (!std::is_sorted(seq.frames.begin(), seq.frames.end(), by_index)) {
        std::stable_sort(seq.frames.begin(), seq.frames.end(), by_index);
        result.warnings.emplace_back("frames were out of order and have been sorted by frame index");
    }
    for (std::size_t i = 1; i < seq.frames.size(); ++i) {
        if (seq.frames[i].frame_index == seq.frames[i - 1].frame_index) {
            throw ValidationError(fmt::format("duplicate frame index {}", seq.frames[i].frame_index));
        }
    }
    if (seq.frames.size() < 2) throw ValidationError("a pose sequence needs at least 2 frames");
    return result;
}

ParsedSequence parse_pose_sequence(std::string_view text, const ParseOptions& options) {
    std::istringstream in{std::string(text)};
    return parse_pose_sequence(in, options);
}

std::string write_pose_sequence(const PoseSequence& seq) {
    std::string out;
    for (const auto& frame : seq.frames) {
        json record;
        record["frame"] = frame.frame_index;
        if (frame.time_s) record["time_s"] = *frame.time_s;
        json kps = json::object();
        for (std::size_t i = 0; i < kKeypointCount; ++i) {
            if (const auto& obs = frame.keypoints[i]) {
                kps[std::string(to_string(static_cast<Keypoint>(i)))] =
                    json::array({obs->position.x, obs->position.y, obs->visibility});
            }
        }
        record["keypoints"] = std::move(kps);
        out += record.dump();
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

AnnotationSet parse_cycle_annotations(std::string_view text) {
    const json doc = parse_json(text, "annotations");
    AnnotationSet set;
    if (!doc.is_object()) throw ValidationError("annotations: expected an object");
    if (const auto it = doc.find("video_id"); it != doc.end()) {
        if (!it->is_string()) throw ValidationError("annotations: video_id must be a string");
        set.video_id = it->get<std::string>();
    }
    const json& cycles = member(doc, "cycles", "annotations");
    if (!cycles.is_array()) throw ValidationError("annotations: cycles must be an array");
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        const std::string where = fmt::format("annotations: cycle {}", i);
        CycleAnnotation ann;
        ann.start_frame = integer(member(cycles[i], "start_frame", where), where + " start_frame");
        ann.end_frame = integer(member(cycles[i], "end_frame", where), where + " end_frame");
        const json& label = member(cycles[i], "label", where);
        const auto parsed = label.is_string() ? cycle_label_from_string(label.get<std::string>())
                                              : std::nullopt;
        if (!parsed) throw ValidationError(fmt::format("{}: unknown label {}", where, label.dump()));
        ann.label = *parsed;
        if (ann.start_frame < 0) throw ValidationError(fmt::format("{}: negative start_frame", where));
        if (ann.end_frame <= ann.start_frame) {
            throw ValidationError(fmt::format("{}: end_frame {} must exceed start_frame {}", where,
                                              ann.end_frame, ann.start_frame));
        }
        set.cycles.push_back(ann);
    }
    std::stable_sort(set.cycles.begin(), set.cycles.end(),
                     [](const auto& a, const auto& b) { return a.start_frame < b.start_frame; });
    for (std::size_t i = 1; i < set.cycles.size(); ++i) {
        if (set.cycles[i].start_frame < set.cycles[i - 1].end_frame) {
            throw ValidationError(fmt::format("annotations: cycles [{}, {}] and [{}, {}] overlap",
                                              set.cycles[i - 1].start_frame, set.cycles[i - 1].end_frame,
                                              set.cycles[i].start_frame, set.cycles[i].end_frame));
        }
    }
    return set;
}

AnnotationSet parse_cycle_annotations(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_cycle_annotations(ss.str());
}

std::string write_cycle_annotations(const AnnotationSet& set) {
    json doc;
    doc["video_id"] = set.video_id;
    doc["cycles"] = json::array();
    for (const auto& c : set.cycles) {
        doc["cycles"].push_back(
            {{"start_frame", c.start_frame}, {"end_frame", c.end_frame}, {"label", to_string(c.label)}});
    }
    return dump_json(doc);
}

void validate_annotations(const std::vector<CycleAnnotation>& cycles, const PoseSequence& seq) {
    if (seq.frames.empty()) throw ValidationError("empty pose sequence");
    const auto first = seq.frames.front().frame_index;
    const auto last = seq.frames.back().frame_index;
    for (const auto& c : cycles) {
        if (c.start_frame < first || c.end_frame > last) {
            throw ValidationError(fmt::format("cycle [{}, {}] outside sequence frames [{}, {}]",
                                              c.start_frame, c.end_frame, first, last));
        }
    }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> number_array(const json& v, std::string_view what) {
    if (!v.is_array()) throw ValidationError(fmt::format("{}: expected an array", what));
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(finite_number(e, what));
    return out;
}

JointName joint_key(const std::string& key, std::string_view what) {
    const auto joint = joint_from_string(key);
    if (!joint) throw ValidationError(fmt::format("{}: unknown joint \"{}\"", what, key));
    return *joint;
}

}  // namespace

json model_to_json(const NormativeModel& model) {
    json doc;
    doc["schema"] = kModelSchema;
    doc["grid_points"] = model.grid_points;
    doc["std_kind"] = to_string(model.std_kind);
    json joints = json::object();
    for (const auto& [joint, norm] : model.joints) {
        joints[std::string(to_string(joint))] = {{"mean", norm.mean},
                                                 {"std", norm.std},
                                                 {"n_cycles", norm.n_cycles},
                                                 {"cycle_ids", norm.cycle_ids}};
    }
    doc["joints"] = std::move(joints);
    return doc;
}

NormativeModel model_from_json(const json& doc) {
    const json& schema = member(doc, "schema", "model");
    if (!schema.is_string() || schema.get<std::string>() != kModelSchema) {
        throw ValidationError(fmt::format("model: schema mismatch, expected \"{}\"", kModelSchema));
    }
    NormativeModel model;
    model.grid_points = static_cast<int>(integer(member(doc, "grid_points", "model"), "model grid_points"));
    const json& kind = member(doc, "std_kind", "model");
    const auto parsed_kind = kind.is_string() ? std_kind_from_string(kind.get<std::string>()) : std::nullopt;
    if (!parsed_kind) throw ValidationError("model: std_kind must be \"sample\" or \"population\"");
    model.std_kind = *parsed_kind;
    const json& joints = member(doc, "joints", "model");
    if (!joints.is_object()) throw ValidationError("model: joints must be an object");
    for (const auto& [key, value] : joints.items()) {
        const std::string where = "model " + key;
        JointNorm norm;
        norm.mean = number_array(member(value, "mean", where), where + " mean");
        norm.std = number_array(member(value, "std", where), where + " std");
        norm.n_cycles = static_cast<int>(integer(member(value, "n_cycles", where), where + " n_cycles"));
        if (const auto it = value.find("cycle_ids"); it != value.end()) {
            if (!it->is_array()) throw ValidationError(where + ": cycle_ids must be an array");
            for (const auto& id : *it) {
                if (!id.is_string()) throw ValidationError(where + ": cycle_ids must hold strings");
                norm.cycle_ids.push_back(id.get<std::string>());
            }
        }
        model.joints.emplace(joint_key(key, "model"), std::move(norm));
    }
    validate(model);
    return model;
}

std::string save_norm_model(const NormativeModel& model) {
    validate(model);
    return dump_json(model_to_json(model));
}

NormativeModel load_norm_model(std::string_view text) {
    return model_from_json(parse_json(text, "model"));
}

// ---------------------------------------------------------------------------

json cycles_to_json(const std::vector<NormalizedCycle>& cycles) {
    json arr = json::array();
    for (const auto& c : cycles) {
        json joints = json::object();
        json invalid = json::array();
        for (const JointName joint : kJointDisplayOrder) {
            if (c.valid(joint)) {
                joints[std::string(to_string(joint))] = c.curve(joint);
            } else {
                invalid.push_back(to_string(joint));
            }
        }
        arr.push_back({{"id", c.id},
                       {"label", to_string(c.label)},
                       {"grid_points", c.grid_points},
                       {"joints", std::move(joints)},
                       {"invalid_joints", std::move(invalid)}});
    }
    return arr;
}

std::vector<NormalizedCycle> cycles_from_json(const json& arr) {
    if (!arr.is_array()) throw ValidationError("cycles: expected an array");
    std::vector<NormalizedCycle> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string where = fmt::format("cycles[{}]", i);
        const json& obj = arr[i];
        NormalizedCycle c;
        if (const auto it = obj.find("id"); it != obj.end() && it->is_string()) c.id = it->get<std::string>();
        const json& label = member(obj, "label", where);
        const auto parsed = label.is_string() ? cycle_label_from_string(label.get<std::string>())
                                              : std::nullopt;
        if (!parsed) throw ValidationError(where + ": unknown label");
        c.label = *parsed;
        c.grid_points = static_cast<int>(integer(member(obj, "grid_points", where), where + " grid_points"));
        if (c.grid_points < 2) throw ValidationError(where + ": grid_points must be >= 2");
        const json& joints = member(obj, "joints", where);
        if (!joints.is_object()) throw ValidationError(where + ": joints must be an object");
        for (const auto& [key, value] : joints.items()) {
            auto curve = number_array(value, where + " " + key);
            if (curve.size() != static_cast<std::size_t>(c.grid_points)) {
                throw ValidationError(fmt::format("{} {}: length {} differs from grid_points {}", where,
                                                  key, curve.size(), c.grid_points));
            }
            c.set_curve(joint_key(key, where), std::move(curve));
        }
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------

json angles_to_json(const std::string& video_id, const AngleSeriesMap& series, double min_visibility) {
    json doc;
    doc["video_id"] = video_id;
    doc["min_visibility"] = min_visibility;
    json joints = json::object();
    for (const auto& [joint, s] : series) {
        json samples = json::array();
        for (const auto& a : s.samples) {
            json rec;
            rec["frame"] = a.frame_index;
            if (a.time_s) rec["time_s"] = *a.time_s;
            rec["angle"] = a.angle_deg ? json(*a.angle_deg) : json(nullptr);
            if (a.missing_reason) rec["missing"] = to_string(*a.missing_reason);
            samples.push_back(std::move(rec));
        }
        joints[std::string(to_string(joint))] = std::move(samples);
    }
    doc["joints"] = std::move(joints);
    return doc;
}

AngleSeriesMap angles_from_json(const json& doc) {
    AngleSeriesMap out;
    const json& joints = member(doc, "joints", "angles");
    if (!joints.is_object()) throw ValidationError("angles: joints must be an object");
    for (const auto& [key, samples] : joints.items()) {
        const JointName joint = joint_key(key, "angles");
        AngleSeries series{joint, {}};
        if (!samples.is_array()) throw ValidationError("angles: " + key + " must be an array");
        for (const auto& rec : samples) {
            AngleSample a;
            a.frame_index = integer(member(rec, "frame", "angles " + key), "angles frame");
            if (const auto it = rec.find("time_s"); it != rec.end()) a.time_s = finite_number(*it, "time_s");
            const json& angle = member(rec, "angle", "angles " + key);
            if (!angle.is_null()) {
                a.angle_deg = finite_number(angle, "angle");
            } else {
                a.missing_reason = MissingReason::absent_keypoint;
                if (const auto it = rec.find("missing"); it != rec.end() && it->is_string()) {
                    const auto s = it->get<std::string>();
                    if (s == "low_visibility") a.missing_reason = MissingReason::low_visibility;
                    if (s == "degenerate_geometry") a.missing_reason = MissingReason::degenerate_geometry;
                }
            }
            if (!series.samples.empty() && a.frame_index <= series.samples.back().frame_index) {
                throw ValidationError("angles: frame indices must be strictly increasing");
            }
            series.samples.push_back(a);
        }
        out.emplace(joint, std::move(series));
    }
    return out;
}

json report_to_json(const DeviationReport& report) {
    json doc;
    doc["video_id"] = report.video_id;
    json cycle;
    cycle["id"] = report.cycle_id;
    if (report.annotation) {
        cycle["start_frame"] = report.annotation->start_frame;
        cycle["end_frame"] = report.annotation->end_frame;
        cycle["label"] = to_string(report.annotation->label);
    }
    doc["cycle"] = std::move(cycle);
    doc["grid_points"] = report.grid_points;
    doc["config"] = {{"k", report.config.k},
                     {"sigma_floor_deg", report.config.sigma_floor_deg},
                     {"severity_clip", report.config.severity_clip}};
    json joints = json::object();
    for (const auto& [joint, dev] : report.joints) {
        joints[std::string(to_string(joint))] = {{"angle", dev.angle},
                                                 {"z", dev.z},
                                                 {"flag", dev.flag},
                                                 {"severity", dev.severity},
                                                 {"flagged_fraction", dev.flagged_fraction}};
    }
    doc["joints"] = std::move(joints);
    json unknown = json::array();
    for (const auto j : report.unknown_joints) unknown.push_back(to_string(j));
    doc["unknown_joints"] = std::move(unknown);
    return doc;
}

DeviationReport report_from_json(const json& doc) {
    DeviationReport r;
    const json& vid = member(doc, "video_id", "report");
    if (!vid.is_string()) throw ValidationError("report: video_id must be a string");
    r.video_id = vid.get<std::string>();
    const json& cycle = member(doc, "cycle", "report");
    if (const auto it = cycle.find("id"); it != cycle.end() && it->is_string()) r.cycle_id = it->get<std::string>();
    if (cycle.contains("start_frame")) {
        CycleAnnotation ann;
        ann.start_frame = integer(cycle["start_frame"], "report start_frame");
        ann.end_frame = integer(member(cycle, "end_frame", "report cycle"), "report end_frame");
        const auto label = cycle_label_from_string(member(cycle, "label", "report cycle").get<std::string>());
        if (!label) throw ValidationError("report: unknown cycle label");
        ann.label = *label;
        r.annotation = ann;
    }
    r.grid_points = static_cast<int>(integer(member(doc, "grid_points", "report"), "report grid_points"));
    if (const auto it = doc.find("config"); it != doc.end()) {
        r.config.k = finite_number(member(*it, "k", "report config"), "k");
        r.config.sigma_floor_deg = finite_number(member(*it, "sigma_floor_deg", "report config"), "sigma_floor_deg");
        r.config.severity_clip = finite_number(member(*it, "severity_clip", "report config"), "severity_clip");
    }
    const json& joints = member(doc, "joints", "report");
    for (const auto& [key, value] : joints.items()) {
        const std::string where = "report " + key;
        JointDeviation dev;
        if (value.contains("angle")) dev.angle = number_array(value["angle"], where + " angle");
        dev.z = number_array(member(value, "z", where), where + " z");
        dev.severity = number_array(member(value, "severity", where), where + " severity");
        const json& flags = member(value, "flag", where);
        if (!flags.is_array()) throw ValidationError(where + ": flag must be an array");
        for (const auto& f : flags) {
            if (!f.is_boolean()) throw ValidationError(where + ": flag must hold booleans");
            dev.flag.push_back(f.get<bool>());
        }
        dev.flagged_fraction = finite_number(member(value, "flagged_fraction", where), "flagged_fraction");
        const auto n = static_cast<std::size_t>(r.grid_points);
        if (dev.z.size() != n || dev.flag.size() != n || dev.severity.size() != n ||
            (!dev.angle.empty() && dev.angle.size() != n)) {
            throw ValidationError(where + ": array length differs from grid_points");
        }
        r.joints.emplace(joint_key(key, "report"), std::move(dev));
    }
    if (const auto it = doc.find("unknown_joints"); it != doc.end()) {
        for (const auto& name : *it) r.unknown_joints.push_back(joint_key(name.get<std::string>(), "report"));
    }
    return r;
}

// ---------------------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError(fmt::format("error reading {}", path.string()));
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError(fmt::format("error writing {}", path.string()));
}

}  // namespace gaitnorm
