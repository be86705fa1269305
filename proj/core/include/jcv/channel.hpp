#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "jcv/common.hpp"
#include "jcv/physio.hpp"
#include "jcv/waveform.hpp"

namespace jcv {

/// A person in the scene. Ranges are one-way; the round trip is modelled
/// monostatically.
struct SceneTarget {
    double rest_range_m = 2.0;
    DisplacementTrace trace;
    double reflectivity = 0.67;
    double nlos_attenuation_db = 0.0;

    /// Received amplitude including the obstruction loss.
    double amplitude() const;
};

/// Static point reflector (furniture, walls, obstacles).
struct ClutterReflector {
    double range_m = 0.0;
    double amplitude = 0.0;

    bool operator==(const ClutterReflector&) const = default;
};

struct Scene {
    std::vector<SceneTarget> targets;
    std::vector<ClutterReflector> static_clutter;
    double cable_delay_range_m = 0.0;
    /// Per-pulse SNR at the channel impulse response peak of the strongest
    /// target, evaluated without obstruction loss. +inf disables noise.
    double snr_db = std::numeric_limits<double>::infinity();
    double frame_rate_hz = 50.0;
};

/// Slow-time x fast-time complex samples.
struct SlowFastMatrix {
    ComplexMatrix frames;
    double frame_rate_hz = 0.0;
    WaveformSpec spec;

    std::size_t num_frames() const { return frames.rows(); }
};

/// Noise variance per complex fast-time sample implied by the scene SNR.
double noise_variance_per_sample(const Scene& scene, const WaveformSpec& spec);

/// Round-trip delay (seconds) for a one-way range.
inline double round_trip_delay(double range_m) { return 2.0 * range_m / kSpeedOfLight; }

/// Frequency-domain channel for one set of point reflectors.
/// Each entry is (amplitude, one-way range including cable).
std::vector<cd> point_channel(const WaveformSpec& spec,
                              const std::vector<std::pair<double, double>>& reflectors);

SlowFastMatrix simulate_capture(const Scene& scene, const BasebandSymbol& symbol,
                                const WaveformSpec& spec, std::size_t n_frames,
                                std::uint64_t seed);

/// c * pulse_duration / 2; ranges beyond this alias within a pulse.
double max_unambiguous_range(const WaveformSpec& spec);

}  // namespace jcv
