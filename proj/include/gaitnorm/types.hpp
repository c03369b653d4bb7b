#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gaitnorm {

/// Input or invariant violation. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File system failure. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Keypoints

enum class Keypoint : std::uint8_t {
    left_shoulder,
    right_shoulder,
    left_elbow,
    right_elbow,
    left_wrist,
    right_wrist,
    left_hip,
    right_hip,
    left_knee,
    right_knee,
    left_ankle,
    right_ankle,
    left_heel,
    right_heel,
    left_hallux,
    right_hallux,
};

inline constexpr std::size_t kKeypointCount = 16;

std::string_view to_string(Keypoint kp);
std::optional<Keypoint> keypoint_from_string(std::string_view name);

/// Image coordinates in pixels, origin top-left.
struct Point2D {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2D&, const Point2D&) = default;
};

struct Observation {
    Point2D position;
    double visibility = 1.0;

    friend bool operator==(const Observation&, const Observation&) = default;
};

/// One video frame. Missing keypoints are empty slots, never (0,0).
struct KeypointFrame {
    std::int64_t frame_index = 0;
    std::optional<double> time_s;
    std::array<std::optional<Observation>, kKeypointCount> keypoints{};

    const std::optional<Observation>& at(Keypoint kp) const {
        return keypoints[static_cast<std::size_t>(kp)];
    }
    std::optional<Observation>& at(Keypoint kp) { return keypoints[static_cast<std::size_t>(kp)]; }

    friend bool operator==(const KeypointFrame&, const KeypointFrame&) = default;
};

struct PoseSequence {
    std::string video_id;
    std::vector<KeypointFrame> frames;
    std::optional<double> fps;

    friend bool operator==(const PoseSequence&, const PoseSequence&) = default;
};

// ---------------------------------------------------------------------------
// Cycles

enum class CycleLabel : std::uint8_t { typical, atypical };

std::string_view to_string(CycleLabel label);
std::optional<CycleLabel> cycle_label_from_string(std::string_view s);

/// One gait cycle: left initial heel strike to the next left initial heel strike.
struct CycleAnnotation {
    std::int64_t start_frame = 0;
    std::int64_t end_frame = 0;
    CycleLabel label = CycleLabel::typical;

    friend bool operator==(const CycleAnnotation&, const CycleAnnotation&) = default;
};

// ---------------------------------------------------------------------------
// Joints

/// Declaration order is the display order used by every figure and the
/// severity matrix: left then right, proximal to distal.
enum class JointName : std::uint8_t {
    left_shoulder,
    left_elbow,
    left_hip,
    left_knee,
    left_ankle,
    right_shoulder,
    right_elbow,
    right_hip,
    right_knee,
    right_ankle,
};

inline constexpr std::size_t kJointCount = 10;

inline constexpr std::array<JointName, kJointCount> kJointDisplayOrder = {
    JointName::left_shoulder,  JointName::left_elbow,  JointName::left_hip,
    JointName::left_knee,      JointName::left_ankle,  JointName::right_shoulder,
    JointName::right_elbow,    JointName::right_hip,   JointName::right_knee,
    JointName::right_ankle,
};

std::string_view to_string(JointName joint);
std::optional<JointName> joint_from_string(std::string_view name);

inline std::size_t index_of(JointName joint) { return static_cast<std::size_t>(joint); }

// ---------------------------------------------------------------------------
// Normalized cycles

inline constexpr int kDefaultGridPoints = 101;

/// Cycle percent of grid index `g` on a grid of `grid_points` (0..100 inclusive).
inline double grid_phase(int g, int grid_points) {
    return 100.0 * static_cast<double>(g) / static_cast<double>(grid_points - 1);
}

/// One gait cycle's joint angles on the fixed phase grid. An empty slot marks
/// a joint that failed coverage (or was never computed) for this cycle.
struct NormalizedCycle {
    std::string id;
    CycleLabel label = CycleLabel::typical;
    int grid_points = kDefaultGridPoints;
    std::array<std::optional<std::vector<double>>, kJointCount> angles{};

    bool valid(JointName joint) const { return angles[index_of(joint)].has_value(); }
    const std::vector<double>& curve(JointName joint) const { return *angles[index_of(joint)]; }
    void set_curve(JointName joint, std::vector<double> values) {
        angles[index_of(joint)] = std::move(values);
    }

    friend bool operator==(const NormalizedCycle&, const NormalizedCycle&) = default;
};

}  // namespace gaitnorm
