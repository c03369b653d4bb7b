#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaitnorm/detect.hpp"
#include "gaitnorm/normative.hpp"
#include "gaitnorm/types.hpp"

namespace gaitnorm {

/// A rendered SVG document plus a sidecar describing what was plotted.
/// Every count in the sidecar equals the number of matching elements in the
/// document (elements carry class attributes: mean-line, band, pt-normal,
/// pt-abnormal, panel, panel-placeholder, cell, cell-missing).
struct FigureDoc {
    std::string svg;
    nlohmann::json sidecar;
};

struct BandOverlay {
    std::vector<double> angle;
    std::vector<bool> flags;
};

/// Mean curve over cycle percent with a shaded ±k·SD band, and optionally
/// one analyzed cycle drawn as normal / abnormal points.
FigureDoc render_band_plot(const NormativeModel& model, JointName joint,
                           const std::optional<BandOverlay>& overlay = std::nullopt,
                           const DetectionConfig& cfg = {}, const std::string& title = {});

/// Ten panels in display order (left row, right row). Joints unknown in the
/// report or absent from the model get an "insufficient data" placeholder.
FigureDoc render_multi_joint(const NormativeModel& model, const DeviationReport& report,
                             const std::string& title = {});

/// One row per joint, one column per grid point; 0 is white, 1 darkest.
/// Throws on a matrix without any valid row.
FigureDoc render_heatmap(const SeverityMatrix& matrix, const std::string& title = {});

std::string_view status_color(JointStatus status);

struct OverlayJoint {
    JointName joint;
    JointStatus status = JointStatus::unknown;
    std::optional<Point2D> at;  // axis keypoint position, when present
};

struct OverlayFrame {
    std::int64_t frame_index = 0;
    std::vector<std::pair<Keypoint, Point2D>> keypoints;
    std::vector<std::pair<Keypoint, Keypoint>> edges;
    std::vector<OverlayJoint> joints;  // display order
};

/// Skeleton edges drawn between keypoints.
const std::vector<std::pair<Keypoint, Keypoint>>& skeleton_edges();

/// Per-frame drawing records. Frames without a status are all unknown.
std::vector<OverlayFrame> annotate_frames(const PoseSequence& seq,
                                          const std::vector<FrameStatus>& statuses);

/// One JSON object per line.
std::string overlay_to_jsonl(const std::vector<OverlayFrame>& frames);

}  // namespace gaitnorm
