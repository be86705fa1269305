#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "jcv/channel.hpp"
#include "jcv/ranging.hpp"
#include "jcv/receiver.hpp"
#include "jcv/vitals.hpp"

namespace jcv {

/// Everything downstream of the raw capture: channel estimation, ranging and
/// per-target vital-sign extraction.
struct AnalysisConfig {
    VitalsConfig vitals;
    DetectionOptions detection;
    double cable_offset_m = 0.0;
    bool hann_window = false;
    bool clutter_suppression = false;
    /// Slow-time averaging applied before estimation (raw frames) or after
    /// it (channel estimates) when average_transfer is set.
    std::size_t averaging_factor = 1;
    bool average_transfer = false;
    /// Remove the other detections' point responses before phase extraction.
    bool joint_extraction = true;
    /// Process only this many centered subcarriers of the captured band.
    std::optional<std::size_t> subcarrier_count;

    bool operator==(const AnalysisConfig&) const = default;
};

struct TargetResult {
    std::size_t target_id = 0;
    TargetDetection detection;
    PhaseTrack track;
    VitalsEstimate vitals;
};

struct PipelineResult {
    ChannelFrameSeries series;
    RangeProfileSeries profiles;
    std::vector<TargetDetection> detections;  ///< strongest first
    std::vector<TargetResult> targets;        ///< ordered by range, ids 0..n-1
    std::size_t dropped_frames = 0;
};

PipelineResult process_capture(const SlowFastMatrix& capture, const AnalysisConfig& config);

}  // namespace jcv
