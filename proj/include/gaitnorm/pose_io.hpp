#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaitnorm/detect.hpp"
#include "gaitnorm/kinematics.hpp"
#include "gaitnorm/normative.hpp"
#include "gaitnorm/types.hpp"

namespace gaitnorm {

inline constexpr std::string_view kModelSchema = "gaitnorm/1";

// ---------------------------------------------------------------------------
// Keypoint sequences (one JSON object per line)

struct ParseOptions {
    bool strict = false;  // reject unknown keypoint names instead of skipping them
    std::string video_id;
    std::optional<double> fps;
};

struct ParsedSequence {
    PoseSequence sequence;
    std::vector<std::string> warnings;
};

/// Line format: {"frame": int, "time_s": number?, "keypoints": {"left_knee": [x, y, vis], ...}}.
/// Blank lines are skipped. Frames come back sorted by index.
ParsedSequence parse_pose_sequence(std::istream& in, const ParseOptions& options = {});
ParsedSequence parse_pose_sequence(std::string_view text, const ParseOptions& options = {});

std::string write_pose_sequence(const PoseSequence& seq);

// ---------------------------------------------------------------------------
// Cycle annotations

struct AnnotationSet {
    std::string video_id;
    std::vector<CycleAnnotation> cycles;  // sorted by start_frame
};

/// Cycles may touch at a shared heel-strike frame but must not otherwise overlap.
AnnotationSet parse_cycle_annotations(std::istream& in);
AnnotationSet parse_cycle_annotations(std::string_view text);

std::string write_cycle_annotations(const AnnotationSet& set);

/// Throws if any cycle boundary falls outside the sequence's frame range.
void validate_annotations(const std::vector<CycleAnnotation>& cycles, const PoseSequence& seq);

// ---------------------------------------------------------------------------
// Normative model file

nlohmann::json model_to_json(const NormativeModel& model);
NormativeModel model_from_json(const nlohmann::json& j);

/// Doubles are written in shortest round-trip form, so load(save(m)) == m.
std::string save_norm_model(const NormativeModel& model);
NormativeModel load_norm_model(std::string_view text);

// ---------------------------------------------------------------------------
// Normalized cycles (array of cycle objects)

nlohmann::json cycles_to_json(const std::vector<NormalizedCycle>& cycles);
std::vector<NormalizedCycle> cycles_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Angle series and deviation reports

nlohmann::json angles_to_json(const std::string& video_id, const AngleSeriesMap& series,
                              double min_visibility);
AngleSeriesMap angles_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const DeviationReport& report);
DeviationReport report_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Files

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Parse JSON text, mapping syntax errors to ValidationError.
nlohmann::json parse_json(std::string_view text, std::string_view what);

/// Canonical on-disk form of every JSON document this library writes.
std::string dump_json(const nlohmann::json& j);

}  // namespace gaitnorm
