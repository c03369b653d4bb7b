#include "gaitnorm/types.hpp"

namespace gaitnorm {
namespace {

constexpr std::array<std::string_view, kKeypointCount> kKeypointNames = {
    "left_shoulder", "right_shoulder", "left_elbow", "right_elbow", "left_wrist", "right_wrist",
    "left_hip",      "right_hip",      "left_knee",  "right_knee",  "left_ankle", "right_ankle",
    "left_heel",     "right_heel",     "left_hallux", "right_hallux",
};

constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "left_shoulder",  "left_elbow",  "left_hip",  "left_knee",  "left_ankle",
    "right_shoulder", "right_elbow", "right_hip", "right_knee", "right_ankle",
};

}  // namespace

std::string_view to_string(Keypoint kp) { return kKeypointNames[static_cast<std::size_t>(kp)]; }

std::optional<Keypoint> keypoint_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kKeypointNames.size(); ++i) {
        if (kKeypointNames[i] == name) return static_cast<Keypoint>(i);
    }
    return std::nullopt;
}

std::string_view to_string(CycleLabel label) {
    return label == CycleLabel::typical ? "typical" : "atypical";
}

std::optional<CycleLabel> cycle_label_from_string(std::string_view s) {
    if (s == "typical") return CycleLabel::typical;
    if (s == "atypical") return CycleLabel::atypical;
    return std::nullopt;
}

std::string_view to_string(JointName joint) { return kJointNames[index_of(joint)]; }

std::optional<JointName> joint_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kJointNames.size(); ++i) {
        if (kJointNames[i] == name) return static_cast<JointName>(i);
    }
    return std::nullopt;
}

}  // namespace gaitnorm
