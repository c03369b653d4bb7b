#include "gaitnorm/cycle.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gaitnorm/spline.hpp"

namespace gaitnorm {

double phase_of_frame(const CycleAnnotation& cycle, std::int64_t frame_index) {
    if (cycle.end_frame <= cycle.start_frame) {
        throw ValidationError("cycle end_frame must exceed start_frame");
    }
    if (frame_index < cycle.start_frame || frame_index > cycle.end_frame) {
        throw ValidationError(fmt::format("frame {} outside cycle [{}, {}]", frame_index,
                                          cycle.start_frame, cycle.end_frame));
    }
    return 100.0 * static_cast<double>(frame_index - cycle.start_frame) /
           static_cast<double>(cycle.end_frame - cycle.start_frame);
}

double phase_of_time(double start_s, double end_s, double time_s) {
    if (!(end_s > start_s)) throw ValidationError("cycle end time must exceed start time");
    if (time_s < start_s || time_s > end_s) {
        throw ValidationError(fmt::format("time {} outside cycle [{}, {}]", time_s, start_s, end_s));
    }
    return 100.0 * (time_s - start_s) / (end_s - start_s);
}

namespace {

const AngleSample* find_frame(const std::vector<AngleSample>& samples, std::int64_t frame) {
    const auto it = std::lower_bound(
        samples.begin(), samples.end(), frame,
        [](const AngleSample& s, std::int64_t f) { return s.frame_index < f; });
    return (it != samples.end() && it->frame_index == frame) ? &*it : nullptr;
}

}  // namespace

std::vector<CycleSlice> segment_cycles(const AngleSeriesMap& series,
                                       const std::vector<CycleAnnotation>& annotations,
                                       const std::string& video_id, PhaseMode mode) {
    std::vector<CycleSlice> slices;
    slices.reserve(annotations.size());
    for (std::size_t k = 0; k < annotations.size(); ++k) {
        const auto& ann = annotations[k];
        if (ann.end_frame <= ann.start_frame) {
            throw ValidationError("cycle end_frame must exceed start_frame");
        }
        CycleSlice slice;
        slice.annotation = ann;
        slice.id = fmt::format("{}{}cycle{}:{}-{}", video_id, video_id.empty() ? "" : "/", k,
                               ann.start_frame, ann.end_frame);
        for (const auto& [joint, s] : series) {
            const AngleSample* first = find_frame(s.samples, ann.start_frame);
            const AngleSample* last = find_frame(s.samples, ann.end_frame);
            if (!first || !last) {
                throw ValidationError(fmt::format(
                    "annotation [{}, {}] references frames absent from the sequence",
                    ann.start_frame, ann.end_frame));
            }
            if (mode == PhaseMode::timestamp && (!first->time_s || !last->time_s)) {
                throw ValidationError("timestamp phase mode requires time_s on cycle boundary frames");
            }
            auto& out = slice.joints[joint];
            for (const AngleSample* it = first; it <= last; ++it) {
                double phase = 0.0;
                if (mode == PhaseMode::frame_index) {
                    phase = phase_of_frame(ann, it->frame_index);
                } else {
                    if (!it->time_s) {
                        throw ValidationError(fmt::format(
                            "timestamp phase mode: frame {} has no time_s", it->frame_index));
                    }
                    phase = phase_of_time(*first->time_s, *last->time_s, *it->time_s);
                }
                out.push_back({it->frame_index, phase, it->angle_deg});
            }
        }
        slices.push_back(std::move(slice));
    }
    return slices;
}

ResampleResult resample_cycle(const CycleSlice& slice, const ResampleOptions& options) {
    if (options.grid_points < 2) throw ValidationError("grid_points must be at least 2");
    ResampleResult result;
    auto& cycle = result.cycle;
    cycle.id = slice.id;
    cycle.label = slice.annotation.label;
    cycle.grid_points = options.grid_points;

    for (const auto& [joint, samples] : slice.joints) {
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto& s : samples) {
            if (!s.angle_deg) continue;
            if (!xs.empty() && !(s.phase > xs.back())) continue;
            xs.push_back(s.phase);
            ys.push_back(*s.angle_deg);
        }
        const auto name = to_string(joint);
        if (xs.size() < options.min_knots) {
            result.warnings.push_back(fmt::format("{} {}: only {} valid samples, joint invalid",
                                                  slice.id, name, xs.size()));
            continue;
        }
        if (xs.front() > options.edge_coverage_percent ||
            xs.back() < 100.0 - options.edge_coverage_percent) {
            result.warnings.push_back(fmt::format(
                "{} {}: samples cover only [{:.3f}%, {:.3f}%], joint invalid", slice.id, name,
                xs.front(), xs.back()));
            continue;
        }

        const NaturalCubicSpline spline(xs, ys);
        std::vector<double> grid(static_cast<std::size_t>(options.grid_points));
        double worst_excess = 0.0;
        for (int g = 0; g < options.grid_points; ++g) {
            const double phase = std::clamp(grid_phase(g, options.grid_points), spline.x_min(),
                                            spline.x_max());
            const double v = spline(phase);
            worst_excess = std::max({worst_excess, -v, v - 180.0});
            grid[static_cast<std::size_t>(g)] = std::clamp(v, 0.0, 180.0);
        }
        if (worst_excess > options.clamp_warning_deg) {
            result.warnings.push_back(fmt::format("{} {}: spline overshoot clamped by {:.3f} deg",
                                                  slice.id, name, worst_excess));
        }
        cycle.set_curve(joint, std::move(grid));
    }
    return result;
}

}  // namespace gaitnorm
