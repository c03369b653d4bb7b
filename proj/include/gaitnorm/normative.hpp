#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gaitnorm/types.hpp"

namespace gaitnorm {

enum class StdKind { sample, population };

std::string_view to_string(StdKind kind);
std::optional<StdKind> std_kind_from_string(std::string_view s);

struct JointNorm {
    std::vector<double> mean;  // degrees, one per grid point
    std::vector<double> std;   // degrees, one per grid point
    int n_cycles = 0;
    std::vector<std::string> cycle_ids;  // sorted provenance

    friend bool operator==(const JointNorm&, const JointNorm&) = default;
};

/// Per-joint, per-phase mean and standard deviation over a cohort of
/// typical cycles.
struct NormativeModel {
    int grid_points = kDefaultGridPoints;
    StdKind std_kind = StdKind::sample;
    std::map<JointName, JointNorm> joints;

    friend bool operator==(const NormativeModel&, const NormativeModel&) = default;
};

/// Throws ValidationError on any broken invariant (lengths, std ≥ 0,
/// mean in [0, 180], n_cycles ≥ 1).
void validate(const NormativeModel& model);

struct BuildResult {
    NormativeModel model;
    std::vector<std::string> warnings;
};

/// Joints with fewer than two valid cycles are left out with a warning.
/// The result does not depend on the order of `cycles`.
BuildResult build_normative_model(std::span<const NormalizedCycle> cycles,
                                  int grid_points = kDefaultGridPoints,
                                  StdKind std_kind = StdKind::sample);

struct JointSummary {
    JointName joint;
    int n_cycles = 0;
    double min_mean = 0.0;
    double max_mean = 0.0;
    double max_std = 0.0;
};

struct ModelSummary {
    std::vector<JointSummary> joints;  // display order
    int total_cycles = 0;
};

/// total_cycles counts distinct contributing cycles; without provenance it
/// falls back to the largest per-joint n_cycles.
ModelSummary model_summary(const NormativeModel& model);

}  // namespace gaitnorm
