#pragma once

#include <cstddef>
#include <vector>

#include "jcv/common.hpp"
#include "jcv/receiver.hpp"
#include "jcv/waveform.hpp"

namespace jcv {

/// Magnitude of the impulse response per frame on a calibrated range axis.
struct RangeProfileSeries {
    std::vector<double> range_axis;  ///< bin centres, meters
    RealMatrix profiles;             ///< N x P magnitudes
    double range_resolution_m = 0.0; ///< c / (2 B_occupied)
    double bin_width_m = 0.0;        ///< c / (2 f_s)
    double cable_offset_m = 0.0;
    WaveformSpec spec;

    /// Slow-time mean of |h|^2 per bin, in dB.
    std::vector<double> mean_power_db() const;
    /// Range of a (possibly fractional) bin position.
    double range_of_bin(double bin) const { return bin * bin_width_m - cable_offset_m; }
};

struct TargetDetection {
    std::size_t bin_index = 0;
    double fractional_bin = 0.0;  ///< interpolated peak position
    double range_m = 0.0;
    double mean_power_db = 0.0;
    double prominence_db = 0.0;   ///< above the noise-floor median

    bool operator==(const TargetDetection&) const = default;
};

struct DetectionOptions {
    std::size_t max_targets = 4;
    double min_prominence_db = 10.0;
    /// A weaker peak must exceed the worst-case sidelobe envelope of the
    /// stronger detections by this margin to count as a separate target.
    double sidelobe_guard_db = 6.0;

    bool operator==(const DetectionOptions&) const = default;
};

RangeProfileSeries to_range_profiles(const ChannelFrameSeries& series, double cable_offset_m);

/// Peaks of the slow-time averaged profile, strongest first.
std::vector<TargetDetection> detect_targets(const RangeProfileSeries& profiles,
                                            const DetectionOptions& options = {});

/// Raw complex impulse value at the detected bin for every frame.
std::vector<cd> extract_bin_series(const ChannelFrameSeries& series, const TargetDetection& detection);

/// Delay position (fractional bin) maximizing the slow-time energy of the
/// band-limited impulse response within +-1 bin of `bin_index`.
double refine_delay_bin(const ChannelFrameSeries& series, std::size_t bin_index);

/// Slow-time series for detections[which] with the other detections' point
/// responses removed by a per-frame joint least-squares fit.
std::vector<cd> extract_target_series(const ChannelFrameSeries& series,
                                      const std::vector<TargetDetection>& detections,
                                      std::size_t which);

/// Subtract the slow-time mean from every delay bin (and transfer bin).
ChannelFrameSeries suppress_static_clutter(const ChannelFrameSeries& series);

}  // namespace jcv
