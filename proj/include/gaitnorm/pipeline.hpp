#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaitnorm/cycle.hpp"
#include "gaitnorm/detect.hpp"
#include "gaitnorm/kinematics.hpp"
#include "gaitnorm/normative.hpp"
#include "gaitnorm/pose_io.hpp"

namespace gaitnorm {

/// Shared knobs of every CLI subcommand.
struct CliConfig {
    int grid_points = kDefaultGridPoints;
    DetectionConfig detection;
    double min_visibility = kDefaultMinVisibility;
    std::uint64_t seed = 1;
    bool strict = false;
    PhaseMode phase_mode = PhaseMode::frame_index;
    StdKind std_kind = StdKind::sample;

    void validate() const;
    /// Overwrites every field present in `j`; unknown keys are rejected.
    void apply_json(const nlohmann::json& j);
};

inline constexpr const char* kConfigEnvVar = "GAITNORM_CONFIG";

struct NormalizeResult {
    std::vector<NormalizedCycle> cycles;
    std::vector<std::string> warnings;
};

/// segment_cycles followed by resample_cycle for each annotation.
NormalizeResult normalize_cycles(const AngleSeriesMap& series, const std::vector<CycleAnnotation>& annotations,
                                 const std::string& video_id, const CliConfig& cfg);

/// {video_id}.{kind}.{joint}.svg, or {video_id}.{kind}.svg without a joint.
std::string figure_file_name(const std::string& video_id, const std::string& kind,
                             std::optional<JointName> joint = std::nullopt);

/// Writes each figure as .svg plus a .json sidecar. Returns the written paths
/// in a fixed order.
std::vector<std::filesystem::path> write_model_figures(const NormativeModel& model, const std::string& video_id,
                                                       const std::filesystem::path& out_dir,
                                                       const DetectionConfig& cfg);

std::vector<std::filesystem::path> write_report_figures(const NormativeModel& model,
                                                        const std::vector<DeviationReport>& reports,
                                                        const std::filesystem::path& out_dir);

struct RunInputs {
    std::filesystem::path keypoints;
    std::filesystem::path annotations;
    std::optional<std::filesystem::path> model;   // use an existing model file
    std::optional<std::filesystem::path> cohort;  // or build one from a cycles file
    std::filesystem::path out_dir;
    std::string video_id;  // defaults to the annotation file's, then the keypoint file stem
};

struct RunSummary {
    std::vector<std::filesystem::path> written;
    std::vector<std::string> warnings;
};

/// End to end: keypoints → angles → cycles → (model) → reports → figures and
/// frame overlays.
RunSummary run_pipeline(const RunInputs& inputs, const CliConfig& cfg);

nlohmann::json reports_to_json(const std::vector<DeviationReport>& reports);
std::vector<DeviationReport> reports_from_json(const nlohmann::json& j);

}  // namespace gaitnorm
