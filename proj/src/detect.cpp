#include "gaitnorm/detect.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gaitnorm/cycle.hpp"

namespace gaitnorm {

void DetectionConfig::validate() const {
    if (!(k > 0.0)) throw ValidationError("detection k must be > 0");
    if (!(sigma_floor_deg >= 0.0)) throw ValidationError("sigma_floor_deg must be >= 0");
    if (!(severity_clip > 0.0)) throw ValidationError("severity_clip must be > 0");
}

namespace {

void check_grid(const NormalizedCycle& cycle, const NormativeModel& model) {
    if (cycle.grid_points != model.grid_points) {
        throw ValidationError(fmt::format("grid mismatch: cycle has {} points, model {}",
                                          cycle.grid_points, model.grid_points));
    }
}

double divisor(double sd, const DetectionConfig& cfg) { return std::max(sd, cfg.sigma_floor_deg); }

}  // namespace

std::vector<double> z_scores_for_joint(const NormalizedCycle& cycle, const NormativeModel& model,
                                       JointName joint, const DetectionConfig& cfg) {
    cfg.validate();
    check_grid(cycle, model);
    const auto it = model.joints.find(joint);
    if (it == model.joints.end()) {
        throw ValidationError(fmt::format("joint {} absent from model", to_string(joint)));
    }
    if (!cycle.valid(joint)) {
        throw ValidationError(fmt::format("joint {} invalid in cycle {}", to_string(joint), cycle.id));
    }
    const auto& angle = cycle.curve(joint);
    const auto& norm = it->second;
    std::vector<double> z(angle.size());
    for (std::size_t g = 0; g < angle.size(); ++g) {
        z[g] = (angle[g] - norm.mean[g]) / divisor(norm.std[g], cfg);
    }
    return z;
}

JointSeries z_scores(const NormalizedCycle& cycle, const NormativeModel& model,
                     const DetectionConfig& cfg) {
    check_grid(cycle, model);
    JointSeries out;
    for (const JointName joint : kJointDisplayOrder) {
        if (cycle.valid(joint) && model.joints.contains(joint)) {
            out.emplace(joint, z_scores_for_joint(cycle, model, joint, cfg));
        }
    }
    return out;
}

JointFlags flag_abnormal(const JointSeries& z, const DetectionConfig& cfg) {
    cfg.validate();
    JointFlags out;
    for (const auto& [joint, values] : z) {
        std::vector<bool> flags(values.size());
        for (std::size_t g = 0; g < values.size(); ++g) flags[g] = std::abs(values[g]) > cfg.k;
        out.emplace(joint, std::move(flags));
    }
    return out;
}

double severity(double z, const DetectionConfig& cfg) {
    return std::min(std::abs(z), cfg.severity_clip) / cfg.severity_clip;
}

SeverityMatrix severity_matrix(const JointSeries& z, const DetectionConfig& cfg) {
    cfg.validate();
    SeverityMatrix m;
    for (const auto& [joint, values] : z) {
        const int n = static_cast<int>(values.size());
        if (m.grid_points == 0) {
            m.grid_points = n;
        } else if (m.grid_points != n) {
            throw ValidationError("severity_matrix: joints do not share a grid");
        }
        std::vector<double> row(values.size());
        std::transform(values.begin(), values.end(), row.begin(),
                       [&](double v) { return severity(v, cfg); });
        m.rows[index_of(joint)] = std::move(row);
    }
    return m;
}

JointFlags DeviationReport::flags() const {
    JointFlags out;
    for (const auto& [joint, dev] : joints) out.emplace(joint, dev.flag);
    return out;
}

JointSeries DeviationReport::z() const {
    JointSeries out;
    for (const auto& [joint, dev] : joints) out.emplace(joint, dev.z);
    return out;
}

DeviationReport analyze_cycle(const NormalizedCycle& cycle, const NormativeModel& model,
                              const DetectionConfig& cfg, const std::string& video_id,
                              std::optional<CycleAnnotation> annotation) {
    cfg.validate();
    check_grid(cycle, model);
    DeviationReport report;
    report.video_id = video_id;
    report.cycle_id = cycle.id;
    report.annotation = annotation;
    report.grid_points = cycle.grid_points;
    report.config = cfg;

    for (const JointName joint : kJointDisplayOrder) {
        const auto it = model.joints.find(joint);
        if (!cycle.valid(joint) || it == model.joints.end()) {
            report.unknown_joints.push_back(joint);
            continue;
        }
        const auto& norm = it->second;
        JointDeviation dev;
        dev.angle = cycle.curve(joint);
        const std::size_t n = dev.angle.size();
        dev.z.resize(n);
        dev.flag.resize(n);
        dev.severity.resize(n);
        std::size_t flagged = 0;
        for (std::size_t g = 0; g < n; ++g) {
            const double sd = divisor(norm.std[g], cfg);
            const double deviation = dev.angle[g] - norm.mean[g];
            dev.z[g] = deviation / sd;
            dev.flag[g] = std::abs(deviation) > cfg.k * sd;
            dev.severity[g] = severity(dev.z[g], cfg);
            if (dev.flag[g]) ++flagged;
        }
        dev.flagged_fraction = n == 0 ? 0.0 : static_cast<double>(flagged) / static_cast<double>(n);
        report.joints.emplace(joint, std::move(dev));
    }
    return report;
}

std::string_view to_string(JointStatus status) {
    switch (status) {
        case JointStatus::normal: return "normal";
        case JointStatus::abnormal: return "abnormal";
        case JointStatus::unknown: return "unknown";
    }
    return "unknown";
}

std::vector<FrameStatus> frame_statuses(const std::vector<CycleFlags>& cycles,
                                        std::int64_t first_frame, std::int64_t last_frame) {
    std::vector<FrameStatus> out;
    if (last_frame < first_frame) return out;
    out.reserve(static_cast<std::size_t>(last_frame - first_frame + 1));
    for (std::int64_t f = first_frame; f <= last_frame; ++f) {
        FrameStatus status;
        status.frame_index = f;
        status.joints.fill(JointStatus::unknown);
        out.push_back(status);
    }
    std::vector<const CycleFlags*> ordered;
    for (const auto& c : cycles) ordered.push_back(&c);
    std::stable_sort(ordered.begin(), ordered.end(), [](const CycleFlags* a, const CycleFlags* b) {
        return a->annotation.start_frame < b->annotation.start_frame;
    });
    for (const CycleFlags* cp : ordered) {
        const auto& cycle = *cp;
        const auto& ann = cycle.annotation;
        const auto lo = std::max(ann.start_frame, first_frame);
        const auto hi = std::min(ann.end_frame, last_frame);
        for (std::int64_t f = lo; f <= hi; ++f) {
            auto& status = out[static_cast<std::size_t>(f - first_frame)];
            const double phase = phase_of_frame(ann, f);
            const auto g = static_cast<std::size_t>(
                std::lround(phase / 100.0 * static_cast<double>(cycle.grid_points - 1)));
            for (const JointName joint : kJointDisplayOrder) {
                const auto it = cycle.flags.find(joint);
                if (it == cycle.flags.end() || g >= it->second.size()) {
                    status.joints[index_of(joint)] = JointStatus::unknown;
                } else {
                    status.joints[index_of(joint)] =
                        it->second[g] ? JointStatus::abnormal : JointStatus::normal;
                }
            }
        }
    }
    return out;
}

}  // namespace gaitnorm
