#include "jcv/pipeline.hpp"

#include <algorithm>

#include "jcv/waveform.hpp"

namespace jcv {

PipelineResult process_capture(const SlowFastMatrix& capture, const AnalysisConfig& config) {
    const auto symbol = build_waveform(capture.spec);
    const EstimateOptions estimate{config.hann_window};

    PipelineResult out;
    if (config.averaging_factor > 1 && !config.average_transfer) {
        auto averaged = average_slow_time(capture, config.averaging_factor);
        out.dropped_frames = averaged.dropped_frames;
        out.series = estimate_channel(averaged.series, symbol, estimate);
    } else {
        out.series = estimate_channel(capture, symbol, estimate);
        if (config.averaging_factor > 1) {
            auto averaged = average_slow_time(out.series, config.averaging_factor);
            out.dropped_frames = averaged.dropped_frames;
            out.series = std::move(averaged.series);
        }
    }

    if (config.subcarrier_count) out.series = restrict_band(out.series, *config.subcarrier_count);

    const ChannelFrameSeries& detect_series = out.series;
    ChannelFrameSeries suppressed;
    if (config.clutter_suppression) suppressed = suppress_static_clutter(out.series);
    const auto& ranging_input = config.clutter_suppression ? suppressed : detect_series;

    out.profiles = to_range_profiles(ranging_input, config.cable_offset_m);
    out.detections = detect_targets(out.profiles, config.detection);

    std::vector<std::size_t> order(out.detections.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        return out.detections[a].range_m < out.detections[b].range_m;
    });

    for (std::size_t id = 0; id < order.size(); ++id) {
        const auto idx = order[id];
        TargetResult t;
        t.target_id = id;
        t.detection = out.detections[idx];
        // Phase is taken from the unsuppressed series: subtracting the mean
        // would shift every target's phase reference.
        const auto series = (config.joint_extraction && out.detections.size() > 1)
                                ? extract_target_series(out.series, out.detections, idx)
                                : extract_bin_series(out.series, t.detection);
        t.track = phase_track(series, out.series.frame_rate_hz);
        t.vitals = estimate_vitals(t.track, config.vitals);
        out.targets.push_back(std::move(t));
    }
    return out;
}

}  // namespace jcv
