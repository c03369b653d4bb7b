#include <map>

#include "gaitnorm/figures.hpp"
#include "gaitnorm/kinematics.hpp"

namespace gaitnorm {

using nlohmann::json;

const std::vector<std::pair<Keypoint, Keypoint>>& skeleton_edges() {
    using K = Keypoint;
    static const std::vector<std::pair<K, K>> edges = {
        {K::left_shoulder, K::right_shoulder}, {K::left_hip, K::right_hip},
        {K::left_shoulder, K::left_elbow},     {K::left_elbow, K::left_wrist},
        {K::left_shoulder, K::left_hip},       {K::left_hip, K::left_knee},
        {K::left_knee, K::left_ankle},         {K::left_ankle, K::left_heel},
        {K::left_ankle, K::left_hallux},       {K::left_heel, K::left_hallux},
        {K::right_shoulder, K::right_elbow},   {K::right_elbow, K::right_wrist},
        {K::right_shoulder, K::right_hip},     {K::right_hip, K::right_knee},
        {K::right_knee, K::right_ankle},       {K::right_ankle, K::right_heel},
        {K::right_ankle, K::right_hallux},     {K::right_heel, K::right_hallux},
    };
    return edges;
}

std::vector<OverlayFrame> annotate_frames(const PoseSequence& seq,
                                          const std::vector<FrameStatus>& statuses) {
    std::map<std::int64_t, const FrameStatus*> by_frame;
    for (const auto& s : statuses) by_frame[s.frame_index] = &s;
    std::vector<OverlayFrame> out;
    out.reserve(seq.frames.size());
    for (const auto& frame : seq.frames) {
        OverlayFrame rec;
        rec.frame_index = frame.frame_index;
        for (std::size_t i = 0; i < kKeypointCount; ++i) {
            if (const auto& obs = frame.keypoints[i]) {
                rec.keypoints.emplace_back(static_cast<Keypoint>(i), obs->position);
            }
        }
        for (const auto& [a, b] : skeleton_edges()) {
            if (frame.at(a) && frame.at(b)) rec.edges.emplace_back(a, b);
        }
        const auto st = by_frame.find(frame.frame_index);
        for (const JointName joint : kJointDisplayOrder) {
            OverlayJoint oj{joint, JointStatus::unknown, std::nullopt};
            if (st != by_frame.end()) oj.status = st->second->at(joint);
            if (const auto& axis = frame.at(joint_definition(joint).axis)) oj.at = axis->position;
            rec.joints.push_back(oj);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::string overlay_to_jsonl(const std::vector<OverlayFrame>& frames) {
    std::string out;
    for (const auto& f : frames) {
        json kps = json::object();
        for (const auto& [kp, p] : f.keypoints) kps[std::string(to_string(kp))] = json::array({p.x, p.y});
        json edges = json::array();
        for (const auto& [a, b] : f.edges) edges.push_back(json::array({to_string(a), to_string(b)}));
        json joints = json::object();
        for (const auto& j : f.joints) {
            json rec = {{"status", to_string(j.status)}, {"color", status_color(j.status)}};
            if (j.at) rec["at"] = json::array({j.at->x, j.at->y});
            joints[std::string(to_string(j.joint))] = std::move(rec);
        }
        const json line = {{"frame", f.frame_index}, {"keypoints", kps}, {"edges", edges}, {"joints", joints}};
        out += line.dump();
        out += '\n';
    }
    return out;
}

}  // namespace gaitnorm
