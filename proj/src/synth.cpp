#include "gaitnorm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

namespace gaitnorm {

double JointProfile::evaluate(double percent) const {
    double v = baseline_deg;
    for (const auto& h : harmonics) {
        v += h.amplitude_deg *
             std::sin(2.0 * std::numbers::pi * h.cycles_per_gait_cycle * percent / 100.0 + h.phase_rad);
    }
    return v;
}

ProfileSet demo_profiles(double noise_sd_deg) {
    // Included angles (180 = straight limb). Right side runs half a cycle
    // behind the left.
    const auto side = [&](double shift) {
        ProfileSet p;
        const double pi = std::numbers::pi;
        p[JointName::left_shoulder] = {25.0, {{12.0, 1, 0.0 + shift}, {3.0, 2, 0.5 + shift}}, noise_sd_deg};
        p[JointName::left_elbow] = {150.0, {{8.0, 1, pi / 3 + shift}, {2.0, 2, shift}}, noise_sd_deg};
        p[JointName::left_hip] = {155.0, {{12.0, 1, pi / 2 + shift}, {3.0, 2, shift}}, noise_sd_deg};
        p[JointName::left_knee] = {145.0, {{18.0, 1, 1.2 + shift}, {6.0, 2, 0.3 + 2 * shift}}, noise_sd_deg};
        p[JointName::left_ankle] = {110.0, {{8.0, 1, -0.4 + shift}, {4.0, 2, 1.0 + 2 * shift}}, noise_sd_deg};
        return p;
    };
    ProfileSet out = side(0.0);
    const ProfileSet right = side(std::numbers::pi);
    const std::array<std::pair<JointName, JointName>, 5> mirror = {{
        {JointName::left_shoulder, JointName::right_shoulder},
        {JointName::left_elbow, JointName::right_elbow},
        {JointName::left_hip, JointName::right_hip},
        {JointName::left_knee, JointName::right_knee},
        {JointName::left_ankle, JointName::right_ankle},
    }};
    for (const auto& [l, r] : mirror) out[r] = right.at(l);
    return out;
}

NormalizedCycle generate_cycle(const ProfileSet& profiles, int grid_points, std::uint64_t seed,
                               CycleLabel label) {
    if (grid_points < 2) throw ValidationError("grid_points must be at least 2");
    NormalizedCycle cycle;
    cycle.id = fmt::format("synth-{}", seed);
    cycle.label = label;
    cycle.grid_points = grid_points;
    for (const auto& [joint, profile] : profiles) {
        if (!(profile.noise_sd_deg >= 0.0)) throw ValidationError("noise_sd_deg must be >= 0");
        // Independent stream per (seed, joint) so adding a joint leaves the
        // others unchanged.
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index_of(joint))};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> values(static_cast<std::size_t>(grid_points));
        for (int g = 0; g < grid_points; ++g) {
            double v = profile.evaluate(grid_phase(g, grid_points));
            if (profile.noise_sd_deg > 0.0) v += profile.noise_sd_deg * noise(rng);
            values[static_cast<std::size_t>(g)] = std::clamp(v, 0.0, 180.0);
        }
        cycle.set_curve(joint, std::move(values));
    }
    return cycle;
}

std::vector<NormalizedCycle> generate_cohort(const ProfileSet& profiles, int n, std::uint64_t seed,
                                             int grid_points) {
    if (n < 1) throw ValidationError("cohort size must be >= 1");
    std::vector<NormalizedCycle> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.push_back(generate_cycle(profiles, grid_points, seed + static_cast<std::uint64_t>(i)));
    }
    return out;
}

std::string_view to_string(AbnormalityKind kind) {
    switch (kind) {
        case AbnormalityKind::offset: return "offset";
        case AbnormalityKind::amplitude_scale: return "amplitude_scale";
        case AbnormalityKind::phase_shift: return "phase_shift";
    }
    return "offset";
}

std::optional<AbnormalityKind> abnormality_kind_from_string(std::string_view s) {
    if (s == "offset") return AbnormalityKind::offset;
    if (s == "amplitude_scale") return AbnormalityKind::amplitude_scale;
    if (s == "phase_shift") return AbnormalityKind::phase_shift;
    return std::nullopt;
}

namespace {

// Linear interpolation on the grid, wrapping cyclically (0% and 100% are
// the same heel strike).
double sample_cyclic(const std::vector<double>& curve, double percent) {
    const auto n = static_cast<double>(curve.size() - 1);
    double p = std::fmod(percent, 100.0);
    if (p < 0.0) p += 100.0;
    const double pos = p / 100.0 * n;
    const auto i = std::min(static_cast<std::size_t>(pos), curve.size() - 2);
    const double t = pos - static_cast<double>(i);
    return curve[i] * (1.0 - t) + curve[i + 1] * t;
}

}  // namespace

NormalizedCycle inject_abnormality(const NormalizedCycle& cycle, const AbnormalitySpec& spec) {
    if (!(spec.start_percent >= 0.0 && spec.start_percent < spec.end_percent &&
          spec.end_percent <= 100.0)) {
        throw ValidationError(fmt::format("abnormality window ({}, {}) must satisfy 0 <= start < end <= 100",
                                          spec.start_percent, spec.end_percent));
    }
    if (!cycle.valid(spec.joint)) {
        throw ValidationError(fmt::format("joint {} invalid in cycle {}", to_string(spec.joint), cycle.id));
    }
    NormalizedCycle out = cycle;
    const auto& in = cycle.curve(spec.joint);
    std::vector<double> values = in;
    const double ramp = 2.0 * 100.0 / static_cast<double>(cycle.grid_points - 1);
    double baseline = 0.0;
    if (spec.kind == AbnormalityKind::amplitude_scale) {
        if (spec.baseline_deg) {
            baseline = *spec.baseline_deg;
        } else {
            for (const double v : in) baseline += v;
            baseline /= static_cast<double>(in.size());
        }
    }
    for (int g = 0; g < cycle.grid_points; ++g) {
        const double p = grid_phase(g, cycle.grid_points);
        if (p < spec.start_percent || p > spec.end_percent) continue;
        const double t = std::min(1.0, std::min(p - spec.start_percent, spec.end_percent - p) / ramp);
        const double w = t * t * (3.0 - 2.0 * t);
        if (w == 0.0) continue;
        const auto i = static_cast<std::size_t>(g);
        switch (spec.kind) {
            case AbnormalityKind::offset:
                values[i] = in[i] + w * spec.magnitude;
                break;
            case AbnormalityKind::amplitude_scale:
                values[i] = in[i] + w * (spec.magnitude - 1.0) * (in[i] - baseline);
                break;
            case AbnormalityKind::phase_shift:
                values[i] = in[i] + w * (sample_cyclic(in, p - spec.magnitude) - in[i]);
                break;
        }
        values[i] = std::clamp(values[i], 0.0, 180.0);
    }
    out.set_curve(spec.joint, std::move(values));
    return out;
}

namespace {

struct Vec {
    double x;
    double y;
};

Vec unit(Point2D from, Point2D to) {
    const double dx = to.x - from.x;
    const double dy = to.y - from.y;
    const double len = std::hypot(dx, dy);
    return {dx / len, dy / len};
}

Vec rotate(Vec v, double deg) {
    const double r = deg * std::numbers::pi / 180.0;
    return {v.x * std::cos(r) - v.y * std::sin(r), v.x * std::sin(r) + v.y * std::cos(r)};
}

Point2D step(Point2D from, Vec dir, double length) {
    return {from.x + dir.x * length, from.y + dir.y * length};
}

struct Side {
    Keypoint shoulder, elbow, wrist, hip, knee, ankle, heel, hallux;
    JointName j_shoulder, j_elbow, j_hip, j_knee, j_ankle;
};

constexpr Side kLeft{Keypoint::left_shoulder, Keypoint::left_elbow, Keypoint::left_wrist,
                     Keypoint::left_hip,      Keypoint::left_knee,  Keypoint::left_ankle,
                     Keypoint::left_heel,     Keypoint::left_hallux, JointName::left_shoulder,
                     JointName::left_elbow,   JointName::left_hip,  JointName::left_knee,
                     JointName::left_ankle};
constexpr Side kRight{Keypoint::right_shoulder, Keypoint::right_elbow, Keypoint::right_wrist,
                      Keypoint::right_hip,      Keypoint::right_knee,  Keypoint::right_ankle,
                      Keypoint::right_heel,     Keypoint::right_hallux, JointName::right_shoulder,
                      JointName::right_elbow,   JointName::right_hip,  JointName::right_knee,
                      JointName::right_ankle};

double curve_at(const NormalizedCycle& c, JointName joint, double percent, double fallback) {
    if (!c.valid(joint)) return fallback;
    const auto& curve = c.curve(joint);
    const double pos = percent / 100.0 * static_cast<double>(curve.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(pos), curve.size() - 2);
    const double t = pos - static_cast<double>(i);
    return curve[i] * (1.0 - t) + curve[i + 1] * t;
}

void place_side(KeypointFrame& frame, const Side& s, Point2D hip, const NormalizedCycle& c,
                double percent, double visibility) {
    constexpr double torso = 160.0, upper_arm = 90.0, forearm = 80.0;
    constexpr double thigh = 120.0, shank = 115.0, foot = 40.0;

    const Point2D shoulder = step(hip, {0.0, -1.0}, torso);
    const Point2D knee = step(hip, rotate(unit(hip, shoulder), curve_at(c, s.j_hip, percent, 160.0)), thigh);
    const Point2D ankle = step(knee, rotate(unit(knee, hip), -curve_at(c, s.j_knee, percent, 170.0)), shank);
    const Vec foot_dir = rotate(unit(ankle, knee), curve_at(c, s.j_ankle, percent, 100.0));
    const Point2D hallux = step(ankle, foot_dir, foot);
    const Point2D heel = step(ankle, {-foot_dir.x, -foot_dir.y}, foot * 0.25);
    const Point2D elbow =
        step(shoulder, rotate(unit(shoulder, hip), -curve_at(c, s.j_shoulder, percent, 20.0)), upper_arm);
    const Point2D wrist =
        step(elbow, rotate(unit(elbow, shoulder), curve_at(c, s.j_elbow, percent, 160.0)), forearm);

    const auto put = [&](Keypoint kp, Point2D p) { frame.at(kp) = Observation{p, visibility}; };
    put(s.shoulder, shoulder);
    put(s.elbow, elbow);
    put(s.wrist, wrist);
    put(s.hip, hip);
    put(s.knee, knee);
    put(s.ankle, ankle);
    put(s.heel, heel);
    put(s.hallux, hallux);
}

}  // namespace

SyntheticWalk synthesize_walk(const std::vector<NormalizedCycle>& cycles, const std::string& video_id,
                              const WalkOptions& options) {
    if (cycles.empty()) throw ValidationError("synthesize_walk: no cycles");
    if (options.frames_per_cycle < 5) throw ValidationError("frames_per_cycle must be >= 5");
    if (options.cycles < 1) throw ValidationError("cycles must be >= 1");
    if (!(options.fps > 0.0)) throw ValidationError("fps must be > 0");

    SyntheticWalk walk;
    walk.sequence.video_id = video_id;
    walk.sequence.fps = options.fps;
    const std::int64_t span = options.frames_per_cycle - 1;
    const std::int64_t total = span * options.cycles + 1;
    for (std::int64_t f = 0; f < total; ++f) {
        // Boundary frames belong to the cycle that starts there.
        const auto k = std::min<std::int64_t>(f / span, options.cycles - 1);
        const auto& cycle = cycles[std::min<std::size_t>(static_cast<std::size_t>(k), cycles.size() - 1)];
        const double percent = 100.0 * static_cast<double>(f - k * span) / static_cast<double>(span);

        KeypointFrame frame;
        frame.frame_index = f;
        frame.time_s = static_cast<double>(f) / options.fps;
        const Point2D hip{100.0 + options.stride_px * static_cast<double>(f), 300.0};
        place_side(frame, kLeft, hip, cycle, percent, options.visibility);
        place_side(frame, kRight, {hip.x + 6.0, hip.y}, cycle, percent, options.visibility);
        walk.sequence.frames.push_back(frame);
    }
    for (int k = 0; k < options.cycles; ++k) {
        const auto& cycle = cycles[std::min<std::size_t>(static_cast<std::size_t>(k), cycles.size() - 1)];
        walk.annotations.push_back({k * span, (k + 1) * span, cycle.label});
    }
    return walk;
}

}  // namespace gaitnorm
