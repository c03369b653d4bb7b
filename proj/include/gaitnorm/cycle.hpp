#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaitnorm/kinematics.hpp"
#include "gaitnorm/types.hpp"

namespace gaitnorm {

/// How a frame's cycle percent is derived.
enum class PhaseMode {
    frame_index,  // linear in frame index (constant frame rate)
    timestamp,    // linear in time_s; every frame involved must carry one
};

/// 100 · (frame − start) / (end − start). Throws outside [start, end].
double phase_of_frame(const CycleAnnotation& cycle, std::int64_t frame_index);

/// Same mapping on timestamps.
double phase_of_time(double start_s, double end_s, double time_s);

struct PhaseSample {
    std::int64_t frame_index = 0;
    double phase = 0.0;
    std::optional<double> angle_deg;  // empty when the frame's sample was missing
};

struct CycleSlice {
    std::string id;
    CycleAnnotation annotation;
    std::map<JointName, std::vector<PhaseSample>> joints;
};

/// One slice per annotation, each carrying every frame in [start, end].
/// Adjacent cycles share their boundary frame (100% of one, 0% of the next).
/// Throws if an annotation boundary frame is absent from the series.
std::vector<CycleSlice> segment_cycles(const AngleSeriesMap& series,
                                       const std::vector<CycleAnnotation>& annotations,
                                       const std::string& video_id = {},
                                       PhaseMode mode = PhaseMode::frame_index);

struct ResampleOptions {
    int grid_points = kDefaultGridPoints;
    std::size_t min_knots = 4;
    double edge_coverage_percent = 0.5;
    double clamp_warning_deg = 1.0;
};

struct ResampleResult {
    NormalizedCycle cycle;
    std::vector<std::string> warnings;
};

/// Natural-cubic resampling of each joint onto the phase grid. Joints with
/// fewer than `min_knots` samples, or without samples within
/// `edge_coverage_percent` of both cycle edges, are left invalid.
ResampleResult resample_cycle(const CycleSlice& slice, const ResampleOptions& options = {});

}  // namespace gaitnorm
