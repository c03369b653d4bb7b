#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaitnorm/normative.hpp"
#include "gaitnorm/types.hpp"

namespace gaitnorm {

struct DetectionConfig {
    double k = 1.0;                 // band half-width in SD units
    double sigma_floor_deg = 0.5;   // lower bound on the SD used as divisor
    double severity_clip = 3.0;     // |z| at which shading saturates

    void validate() const;
};

using JointSeries = std::map<JointName, std::vector<double>>;
using JointFlags = std::map<JointName, std::vector<bool>>;

/// Signed z for one joint. Throws on grid mismatch, or if the joint is
/// absent from the model or invalid in the cycle.
std::vector<double> z_scores_for_joint(const NormalizedCycle& cycle, const NormativeModel& model,
                                       JointName joint, const DetectionConfig& cfg = {});

/// Signed z for every joint valid in the cycle and present in the model.
/// Other joints are left out (reported as unknown downstream).
JointSeries z_scores(const NormalizedCycle& cycle, const NormativeModel& model,
                     const DetectionConfig& cfg = {});

/// |z| > k, strictly.
JointFlags flag_abnormal(const JointSeries& z, const DetectionConfig& cfg = {});

double severity(double z, const DetectionConfig& cfg = {});

/// Joints x grid. Every one of the ten joints has a row, in display order;
/// rows for joints without z values are empty.
struct SeverityMatrix {
    int grid_points = 0;
    std::array<std::optional<std::vector<double>>, kJointCount> rows{};

    std::size_t row_count() const { return kJointCount; }
    bool valid_row(JointName joint) const { return rows[index_of(joint)].has_value(); }
};

SeverityMatrix severity_matrix(const JointSeries& z, const DetectionConfig& cfg = {});

struct JointDeviation {
    std::vector<double> angle;
    std::vector<double> z;
    std::vector<bool> flag;
    std::vector<double> severity;
    double flagged_fraction = 0.0;
};

struct DeviationReport {
    std::string video_id;
    std::string cycle_id;
    std::optional<CycleAnnotation> annotation;
    int grid_points = kDefaultGridPoints;
    DetectionConfig config;
    std::map<JointName, JointDeviation> joints;
    std::vector<JointName> unknown_joints;

    JointFlags flags() const;
    JointSeries z() const;
};

/// Full comparison of one cycle against the model. Flags follow
/// |angle − mean| > k · max(std, sigma_floor) evaluated directly.
DeviationReport analyze_cycle(const NormalizedCycle& cycle, const NormativeModel& model,
                              const DetectionConfig& cfg = {}, const std::string& video_id = {},
                              std::optional<CycleAnnotation> annotation = std::nullopt);

enum class JointStatus { normal, abnormal, unknown };

std::string_view to_string(JointStatus status);

struct FrameStatus {
    std::int64_t frame_index = 0;
    std::array<JointStatus, kJointCount> joints{};

    JointStatus at(JointName joint) const { return joints[index_of(joint)]; }
};

struct CycleFlags {
    CycleAnnotation annotation;
    int grid_points = kDefaultGridPoints;
    JointFlags flags;
};

/// Nearest-grid status for every frame in [first_frame, last_frame]. Frames
/// outside every cycle, and joints without flags, are unknown. A frame shared
/// by two cycles takes its status from the later one.
std::vector<FrameStatus> frame_statuses(const std::vector<CycleFlags>& cycles,
                                        std::int64_t first_frame, std::int64_t last_frame);

}  // namespace gaitnorm
