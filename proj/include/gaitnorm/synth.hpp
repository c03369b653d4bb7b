#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gaitnorm/types.hpp"

namespace gaitnorm {

struct Harmonic {
    double amplitude_deg = 0.0;
    int cycles_per_gait_cycle = 1;
    double phase_rad = 0.0;
};

/// baseline + Σ amplitude · sin(2π · f · percent / 100 + phase), plus
/// i.i.d. Gaussian noise per grid point.
struct JointProfile {
    double baseline_deg = 90.0;
    std::vector<Harmonic> harmonics;
    double noise_sd_deg = 0.0;

    /// Noise-free angle at a cycle percent.
    double evaluate(double percent) const;
};

using ProfileSet = std::map<JointName, JointProfile>;

/// Illustrative waveforms for all ten joints. Not clinical norms.
ProfileSet demo_profiles(double noise_sd_deg = 2.0);

NormalizedCycle generate_cycle(const ProfileSet& profiles, int grid_points, std::uint64_t seed,
                               CycleLabel label = CycleLabel::typical);

/// n cycles with seeds seed, seed+1, ...; all typical.
std::vector<NormalizedCycle> generate_cohort(const ProfileSet& profiles, int n, std::uint64_t seed,
                                             int grid_points = kDefaultGridPoints);

enum class AbnormalityKind { offset, amplitude_scale, phase_shift };

std::string_view to_string(AbnormalityKind kind);
std::optional<AbnormalityKind> abnormality_kind_from_string(std::string_view s);

struct AbnormalitySpec {
    JointName joint = JointName::left_knee;
    double start_percent = 0.0;
    double end_percent = 100.0;
    AbnormalityKind kind = AbnormalityKind::offset;
    /// degrees (offset), factor (amplitude_scale) or cycle percent (phase_shift)
    double magnitude = 0.0;
    /// reference for amplitude_scale; defaults to the curve's mean
    std::optional<double> baseline_deg;
};

/// Modifies one joint inside the window, blending in over two grid points
/// at each edge. Values outside the window are untouched; the label is kept.
NormalizedCycle inject_abnormality(const NormalizedCycle& cycle, const AbnormalitySpec& spec);

struct WalkOptions {
    int frames_per_cycle = 41;  // frames from one heel strike to the next, inclusive
    int cycles = 3;
    double fps = 30.0;
    double visibility = 0.95;
    double stride_px = 4.0;     // forward translation per frame
};

struct SyntheticWalk {
    PoseSequence sequence;
    std::vector<CycleAnnotation> annotations;
};

/// Side-view stick figure whose included joint angles follow the given
/// normalized cycles (one per walking cycle; the last is reused if fewer).
/// Every frame is built so that joint_angle reproduces the curve value.
SyntheticWalk synthesize_walk(const std::vector<NormalizedCycle>& cycles,
                              const std::string& video_id, const WalkOptions& options = {});

}  // namespace gaitnorm
