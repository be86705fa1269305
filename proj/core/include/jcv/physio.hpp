#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace jcv {

/// Chest-surface motion parameters for one person. Amplitudes are half the
/// peak-to-peak excursion along the motion vector.
struct VitalParams {
    double breathing_rate_hz = 0.25;
    double breathing_amplitude_m = 6e-3;
    /// Relative amplitude of the 2nd and 3rd breathing harmonics.
    std::array<double, 2> breathing_harmonic_weights{0.3, 0.02};
    double heart_rate_hz = 1.2;
    double heart_amplitude_m = 0.35e-3;
    /// Angle between the motion vector and the radar boresight.
    double projection_angle_deg = 0.0;
    /// RMS of the slow 1/f body sway (0 - 0.1 Hz); 0 disables it.
    double sway_rms_m = 0.0;

    bool operator==(const VitalParams&) const = default;

    /// cos(angle), clamped to 0 for |angle| >= 90 degrees.
    double projection_factor() const;
    void validate() const;
};

enum class SegmentLabel { Normal, BreathHold, Moving };

std::string_view to_string(SegmentLabel label);
SegmentLabel segment_label_from_string(std::string_view name);

/// Half-open sample range [start, end).
struct Segment {
    std::size_t start = 0;
    std::size_t end = 0;
    SegmentLabel label = SegmentLabel::Normal;

    bool operator==(const Segment&) const = default;
};

/// Time-based schedule entry; samples not covered are labelled Normal.
struct ScheduleEntry {
    double start_s = 0.0;
    double end_s = 0.0;
    SegmentLabel label = SegmentLabel::BreathHold;

    bool operator==(const ScheduleEntry&) const = default;
};

/// Radial displacement (meters, relative to the rest range) over slow time.
struct DisplacementTrace {
    double sample_rate_hz = 0.0;
    std::vector<double> samples;
    std::vector<Segment> segments;

    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
    SegmentLabel label_at(std::size_t index) const;
};

/// Breathing + heartbeat (+ optional sway) displacement.
///
/// Breathing is sin(theta) + w2 sin(2 theta) + w3 sin(3 theta), rescaled so the
/// peak-to-peak excursion is 2 * breathing_amplitude_m. Each heartbeat is a
/// raised-cosine pulse of width 0.3 / heart_rate spanning -A..+A. Breath-hold
/// segments zero the breathing term and the adjacent second of normal
/// breathing is tapered so the trace stays continuous.
DisplacementTrace synthesize_displacement(const VitalParams& params, double duration_s,
                                          double frame_rate_hz,
                                          const std::vector<ScheduleEntry>& schedule,
                                          std::uint64_t seed);

/// Back-and-forth walk: range offset rises at `speed` for half the duration
/// and returns. Samples hold the offset from start_range_m; all segments are
/// labelled Moving.
DisplacementTrace walking_trajectory(double start_range_m, double speed_mps, double duration_s,
                                     double frame_rate_hz);

/// Walking trajectory with the person's vital-sign motion superimposed.
DisplacementTrace walking_trajectory(double start_range_m, double speed_mps, double duration_s,
                                     double frame_rate_hz, const VitalParams& vitals,
                                     std::uint64_t seed);

}  // namespace jcv
