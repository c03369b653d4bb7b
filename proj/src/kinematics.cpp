#include "gaitnorm/kinematics.hpp"

#include <cmath>
#include <numbers>

namespace gaitnorm {

std::string_view to_string(MissingReason reason) {
    switch (reason) {
        case MissingReason::low_visibility: return "low_visibility";
        case MissingReason::absent_keypoint: return "absent_keypoint";
        case MissingReason::degenerate_geometry: return "degenerate_geometry";
    }
    return "unknown";
}

double joint_angle(Point2D a, Point2D b, Point2D c) {
    if ((a.x == b.x && a.y == b.y) || (c.x == b.x && c.y == b.y)) {
        throw DegenerateGeometry("degenerate_geometry: axis point coincides with an end point");
    }
    const double radians = std::atan2(c.y - b.y, c.x - b.x) - std::atan2(a.y - b.y, a.x - b.x);
    double angle = std::abs(radians * 180.0 / std::numbers::pi);
    if (angle > 180.0) angle = 360.0 - angle;
    return angle;
}

const std::vector<JointDefinition>& standard_joint_set() {
    using K = Keypoint;
    using J = JointName;
    static const std::vector<JointDefinition> joints = {
        {J::left_shoulder, K::left_hip, K::left_shoulder, K::left_elbow},
        {J::right_shoulder, K::right_hip, K::right_shoulder, K::right_elbow},
        {J::left_elbow, K::left_shoulder, K::left_elbow, K::left_wrist},
        {J::right_elbow, K::right_shoulder, K::right_elbow, K::right_wrist},
        {J::left_hip, K::left_shoulder, K::left_hip, K::left_knee},
        {J::right_hip, K::right_shoulder, K::right_hip, K::right_knee},
        {J::left_knee, K::left_hip, K::left_knee, K::left_ankle},
        {J::right_knee, K::right_hip, K::right_knee, K::right_ankle},
        {J::left_ankle, K::left_knee, K::left_ankle, K::left_hallux},
        {J::right_ankle, K::right_knee, K::right_ankle, K::right_hallux},
    };
    return joints;
}

const JointDefinition& joint_definition(JointName joint) {
    for (const auto& def : standard_joint_set()) {
        if (def.name == joint) return def;
    }
    throw ValidationError("no joint definition");  // unreachable for a closed enum
}

AngleSeries angle_series(const PoseSequence& seq, const JointDefinition& joint,
                         double min_visibility) {
    if (!(min_visibility >= 0.0 && min_visibility <= 1.0)) {
        throw ValidationError("min_visibility must lie in [0, 1]");
    }
    AngleSeries series{joint.name, {}};
    series.samples.reserve(seq.frames.size());
    for (const auto& frame : seq.frames) {
        AngleSample sample{frame.frame_index, frame.time_s, std::nullopt, std::nullopt};
        const auto& a = frame.at(joint.proximal);
        const auto& b = frame.at(joint.axis);
        const auto& c = frame.at(joint.distal);
        if (!a || !b || !c) {
            sample.missing_reason = MissingReason::absent_keypoint;
        } else if (a->visibility < min_visibility || b->visibility < min_visibility ||
                   c->visibility < min_visibility) {
            sample.missing_reason = MissingReason::low_visibility;
        } else {
            try {
                sample.angle_deg = joint_angle(a->position, b->position, c->position);
            } catch (const DegenerateGeometry&) {
                sample.missing_reason = MissingReason::degenerate_geometry;
            }
        }
        series.samples.push_back(sample);
    }
    return series;
}

AngleSeriesMap all_angle_series(const PoseSequence& seq, double min_visibility) {
    AngleSeriesMap out;
    for (const auto& def : standard_joint_set()) {
        out.emplace(def.name, angle_series(seq, def, min_visibility));
    }
    return out;
}

}  // namespace gaitnorm
