#pragma once

#include <map>
#include <optional>
#include <vector>

#include "gaitnorm/types.hpp"

namespace gaitnorm {

/// Thrown by joint_angle when the axis point coincides with A or C.
class DegenerateGeometry : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A clinical joint angle: the included angle at `axis` between the rays
/// towards `proximal` and `distal`.
struct JointDefinition {
    JointName name;
    Keypoint proximal;
    Keypoint axis;
    Keypoint distal;

    friend bool operator==(const JointDefinition&, const JointDefinition&) = default;
};

enum class MissingReason { low_visibility, absent_keypoint, degenerate_geometry };

std::string_view to_string(MissingReason reason);

struct AngleSample {
    std::int64_t frame_index = 0;
    std::optional<double> time_s;
    std::optional<double> angle_deg;  // empty when missing
    std::optional<MissingReason> missing_reason;

    bool missing() const { return !angle_deg.has_value(); }
};

struct AngleSeries {
    JointName joint;
    std::vector<AngleSample> samples;
};

using AngleSeriesMap = std::map<JointName, AngleSeries>;

inline constexpr double kDefaultMinVisibility = 0.5;

/// Unsigned included angle ABC in degrees, in [0, 180].
///
/// Computed from the difference of the two ray headings given by atan2,
/// converted to degrees and made absolute; a raw value above 180 is folded
/// to 360 minus itself.
double joint_angle(Point2D a, Point2D b, Point2D c);

/// The ten joint definitions, in table row order:
/// shoulder (hip, shoulder, elbow), elbow (shoulder, elbow, wrist),
/// hip (shoulder, hip, knee), knee (hip, knee, ankle), ankle (knee, ankle, hallux),
/// each left then right.
const std::vector<JointDefinition>& standard_joint_set();

const JointDefinition& joint_definition(JointName joint);

/// One sample per frame. Frames whose keypoints are absent, below
/// `min_visibility`, or geometrically degenerate yield missing samples.
AngleSeries angle_series(const PoseSequence& seq, const JointDefinition& joint,
                         double min_visibility = kDefaultMinVisibility);

/// angle_series for every joint of the standard set.
AngleSeriesMap all_angle_series(const PoseSequence& seq,
                                double min_visibility = kDefaultMinVisibility);

}  // namespace gaitnorm
