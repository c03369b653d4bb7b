#include "gaitnorm/normative.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace gaitnorm {

std::string_view to_string(StdKind kind) {
    return kind == StdKind::sample ? "sample" : "population";
}

std::optional<StdKind> std_kind_from_string(std::string_view s) {
    if (s == "sample") return StdKind::sample;
    if (s == "population") return StdKind::population;
    return std::nullopt;
}

void validate(const NormativeModel& model) {
    if (model.grid_points < 2) throw ValidationError("grid_points must be at least 2");
    const auto grid = static_cast<std::size_t>(model.grid_points);
    for (const auto& [joint, norm] : model.joints) {
        const auto name = to_string(joint);
        if (norm.mean.size() != grid || norm.std.size() != grid) {
            throw ValidationError(fmt::format("{}: array length differs from grid_points {}", name,
                                              model.grid_points));
        }
        if (norm.n_cycles < 1) throw ValidationError(fmt::format("{}: n_cycles must be >= 1", name));
        for (std::size_t g = 0; g < grid; ++g) {
            if (!(norm.mean[g] >= 0.0 && norm.mean[g] <= 180.0)) {
                throw ValidationError(fmt::format("{}: mean[{}] outside [0, 180]", name, g));
            }
            if (!(norm.std[g] >= 0.0) || !std::isfinite(norm.std[g])) {
                throw ValidationError(fmt::format("{}: std[{}] must be finite and >= 0", name, g));
            }
        }
    }
}

BuildResult build_normative_model(std::span<const NormalizedCycle> cycles, int grid_points,
                                  StdKind std_kind) {
    if (cycles.empty()) throw ValidationError("build_normative_model: no cycles");
    if (grid_points < 2) throw ValidationError("grid_points must be at least 2");
    for (const auto& c : cycles) {
        if (c.grid_points != grid_points) {
            throw ValidationError(fmt::format("cycle {} has grid_points {}, expected {}", c.id,
                                              c.grid_points, grid_points));
        }
        if (c.label != CycleLabel::typical) {
            throw ValidationError(fmt::format("cycle {} is labeled atypical", c.id));
        }
    }

    BuildResult result;
    result.model.grid_points = grid_points;
    result.model.std_kind = std_kind;
    const auto grid = static_cast<std::size_t>(grid_points);

    for (const JointName joint : kJointDisplayOrder) {
        std::vector<const NormalizedCycle*> members;
        for (const auto& c : cycles) {
            if (c.valid(joint)) {
                if (c.curve(joint).size() != grid) {
                    throw ValidationError(fmt::format("cycle {} {}: curve length mismatch", c.id,
                                                      to_string(joint)));
                }
                members.push_back(&c);
            }
        }
        if (members.empty()) continue;
        if (members.size() < 2) {
            result.warnings.push_back(fmt::format(
                "{}: only {} valid cycle, omitted from model", to_string(joint), members.size()));
            continue;
        }

        JointNorm norm;
        norm.n_cycles = static_cast<int>(members.size());
        norm.mean.resize(grid);
        norm.std.resize(grid);
        const double n = static_cast<double>(members.size());
        const double dof = std_kind == StdKind::sample ? n - 1.0 : n;
        std::vector<double> values(members.size());
        for (std::size_t g = 0; g < grid; ++g) {
            for (std::size_t i = 0; i < members.size(); ++i) values[i] = members[i]->curve(joint)[g];
            // Sorted summation keeps the result bit-identical under input reordering.
            std::sort(values.begin(), values.end());
            double sum = 0.0;
            for (const double v : values) sum += v;
            const double mean = sum / n;
            double ss = 0.0;
            for (const double v : values) ss += (v - mean) * (v - mean);
            norm.mean[g] = std::clamp(mean, 0.0, 180.0);
            norm.std[g] = std::sqrt(ss / dof);
        }
        for (const auto* c : members) norm.cycle_ids.push_back(c->id);
        std::sort(norm.cycle_ids.begin(), norm.cycle_ids.end());
        result.model.joints.emplace(joint, std::move(norm));
    }
    return result;
}

ModelSummary model_summary(const NormativeModel& model) {
    ModelSummary summary;
    std::set<std::string> ids;
    bool have_provenance = false;
    for (const JointName joint : kJointDisplayOrder) {
        const auto it = model.joints.find(joint);
        if (it == model.joints.end()) continue;
        const auto& norm = it->second;
        JointSummary js{joint, norm.n_cycles, 0.0, 0.0, 0.0};
        if (!norm.mean.empty()) {
            const auto [lo, hi] = std::minmax_element(norm.mean.begin(), norm.mean.end());
            js.min_mean = *lo;
            js.max_mean = *hi;
        }
        if (!norm.std.empty()) js.max_std = *std::max_element(norm.std.begin(), norm.std.end());
        summary.joints.push_back(js);
        if (!norm.cycle_ids.empty()) have_provenance = true;
        ids.insert(norm.cycle_ids.begin(), norm.cycle_ids.end());
        summary.total_cycles = std::max(summary.total_cycles, norm.n_cycles);
    }
    if (have_provenance) summary.total_cycles = static_cast<int>(ids.size());
    return summary;
}

}  // namespace gaitnorm
