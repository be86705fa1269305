#include <gtest/gtest.h>

#include "jcv/common.hpp"
#include "jcv/channel.hpp"
#include "jcv/ranging.hpp"
#include "jcv/receiver.hpp"
#include "jcv/vitals.hpp"
#include "oracles.hpp"

using namespace jcv;

namespace {

SceneTarget person(double range, std::size_t frames, double amplitude_m = 0.0, double rate_hz = 0.25,
                   double reflectivity = 0.67) {
    SceneTarget t;
    t.rest_range_m = range;
    t.reflectivity = reflectivity;
    t.trace.sample_rate_hz = 50.0;
    t.trace.samples.resize(frames);
    for (std::size_t i = 0; i < frames; ++i)
        t.trace.samples[i] = amplitude_m * std::sin(2.0 * kPi * rate_hz * static_cast<double>(i) / 50.0);
    return t;
}

ChannelFrameSeries run(const Scene& scene, const WaveformSpec& spec, std::size_t frames, std::uint64_t seed = 1) {
    const auto sym = build_waveform(spec);
    return estimate_channel(simulate_capture(scene, sym, spec, frames, seed), sym);
}

Scene scene_of(std::vector<SceneTarget> targets, double snr_db = 20.0, double cable = 0.0) {
    Scene s;
    s.frame_rate_hz = 50.0;
    s.snr_db = snr_db;
    s.targets = std::move(targets);
    s.cable_delay_range_m = cable;
    return s;
}

}  // namespace

TEST(Ranging, AxisCalibration) {
    WaveformSpec spec;
    const auto profiles = to_range_profiles(run(scene_of({person(2.0, 2)}), spec, 2), 0.0);
    EXPECT_NEAR(profiles.bin_width_m, 0.05996, 1e-5);
    EXPECT_NEAR(profiles.range_resolution_m, 0.14638, 1e-5);
    EXPECT_EQ(profiles.range_axis.size(), 2500u);
    EXPECT_NEAR(profiles.range_axis[10], 10.0 * profiles.bin_width_m, 1e-12);
    EXPECT_THROW(to_range_profiles(run(scene_of({}), spec, 1), -1.0), ConfigError);
}

TEST(Ranging, SingleTargetWithinBinWidth) {
    WaveformSpec spec;
    for (double r : {1.0, 2.0, 3.37}) {
        const auto profiles = to_range_profiles(run(scene_of({person(r, 20)}, 20.0), spec, 20), 0.0);
        const auto d = detect_targets(profiles);
        ASSERT_EQ(d.size(), 1u) << r;
        EXPECT_LE(std::abs(d[0].range_m - r), profiles.bin_width_m);
        EXPECT_GE(d[0].prominence_db, DetectionOptions{}.min_prominence_db);
    }
}

TEST(Ranging, CableOffsetShiftsEveryRange) {
    WaveformSpec spec;
    const auto series = run(scene_of({person(1.6, 10), person(3.44, 10, 0.0, 0.25, 0.4)}, 20.0, 1.5), spec, 10);
    const auto d0 = detect_targets(to_range_profiles(series, 0.0));
    const auto d1 = detect_targets(to_range_profiles(series, 1.5));
    ASSERT_EQ(d0.size(), 2u);
    ASSERT_EQ(d1.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(d1[i].range_m, d0[i].range_m - 1.5, 1e-12);
        EXPECT_EQ(d1[i].bin_index, d0[i].bin_index);
    }
    EXPECT_NEAR(d1[0].range_m, 1.6, 0.06);
}

TEST(Ranging, EmptySceneGivesNoDetections) {
    WaveformSpec spec;
    Scene s = scene_of({}, 20.0);
    EXPECT_TRUE(detect_targets(to_range_profiles(run(s, spec, 20), 0.0)).empty());
    s.snr_db = std::numeric_limits<double>::infinity();
    EXPECT_TRUE(detect_targets(to_range_profiles(run(s, spec, 2), 0.0)).empty());
}

TEST(Ranging, ResolutionOfTwoEqualTargets) {
    // Coherent pairs merge or split depending on their relative phase, so
    // only the clear cases are pinned: well apart and well inside one cell.
    WaveformSpec spec;
    const double res = kSpeedOfLight / (2.0 * spec.occupied_bandwidth_hz());
    for (double base : {2.0, 2.013, 2.027}) {
        auto detections = [&](double sep) {
            const auto s = scene_of({person(base, 10), person(base + sep, 10)}, 30.0);
            return detect_targets(to_range_profiles(run(s, spec, 10), 0.0));
        };
        const auto apart = detections(2.0 * res);
        ASSERT_EQ(apart.size(), 2u) << base;
        const auto inside = detections(0.5 * res);
        ASSERT_EQ(inside.size(), 1u) << base;
        EXPECT_GT(inside[0].range_m, base - res);
        EXPECT_LT(inside[0].range_m, base + 1.5 * res);
    }
}

TEST(Ranging, BandwidthSeparatesThreeTargets) {
    WaveformSpec spec;
    const auto s = scene_of({person(1.6, 10), person(2.5, 10, 0.0, 0.25, 0.43), person(3.44, 10, 0.0, 0.25, 0.14)}, 30.0);
    const auto series = run(s, spec, 10);
    EXPECT_EQ(detect_targets(to_range_profiles(series, 0.0)).size(), 3u);
    for (std::size_t count : {40u, 10u})
        EXPECT_LT(detect_targets(to_range_profiles(restrict_band(series, count), 0.0)).size(), 3u) << count;
}

TEST(Ranging, MaxTargetsAndOrdering) {
    WaveformSpec spec;
    const auto s = scene_of({person(1.6, 5, 0.0, 0.25, 0.3), person(2.5, 5), person(3.44, 5, 0.0, 0.25, 0.5)}, 30.0);
    const auto profiles = to_range_profiles(run(s, spec, 5), 0.0);
    const auto all = detect_targets(profiles);
    ASSERT_EQ(all.size(), 3u);
    EXPECT_GE(all[0].mean_power_db, all[1].mean_power_db);
    EXPECT_GE(all[1].mean_power_db, all[2].mean_power_db);
    EXPECT_NEAR(all[0].range_m, 2.5, 0.06);
    DetectionOptions one;
    one.max_targets = 1;
    EXPECT_EQ(detect_targets(profiles, one).size(), 1u);
    one.max_targets = 0;
    EXPECT_THROW(detect_targets(profiles, one), ConfigError);
}

TEST(Ranging, StaticBinSeriesIsConstant) {
    WaveformSpec spec;
    const auto series = run(scene_of({person(2.0, 6)}, std::numeric_limits<double>::infinity()), spec, 6);
    const auto d = detect_targets(to_range_profiles(series, 0.0));
    ASSERT_EQ(d.size(), 1u);
    const auto x = extract_bin_series(series, d[0]);
    ASSERT_EQ(x.size(), 6u);
    for (const auto& v : x) EXPECT_NEAR(std::abs(v - x[0]), 0.0, 1e-12);
    auto bad = d[0];
    bad.bin_index = 2500;
    EXPECT_THROW(extract_bin_series(series, bad), ConfigError);
}

TEST(Ranging, BreathingBinPhaseFollowsRange) {
    WaveformSpec spec;
    const std::size_t n = 200;
    const auto t = person(2.0, n, 3e-3);
    const auto series = run(scene_of({t}, std::numeric_limits<double>::infinity()), spec, n);
    const auto d = detect_targets(to_range_profiles(series, 0.0));
    ASSERT_EQ(d.size(), 1u);
    const auto track = phase_track(extract_bin_series(series, d[0]), 50.0);
    const double lambda = spec.wavelength_m();
    // Up to a constant, the bin phase is -4 pi (R + d) / lambda.
    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i)
        residual[i] = track.unwrapped_phase[i] + 4.0 * kPi * (2.0 + t.trace.samples[i]) / lambda;
    const double r0 = residual[0];
    for (auto& v : residual) v = oracle::wrap(v - r0);
    for (double v : residual) EXPECT_NEAR(v, 0.0, 2e-2);
}

TEST(Ranging, JointExtractionLeakageBelow40dB) {
    WaveformSpec spec;
    const double res = kSpeedOfLight / (2.0 * spec.occupied_bandwidth_hz());
    const std::size_t n = 50;
    const auto a = person(2.0, n);
    const auto b = person(2.0 + 3.0 * res + 0.013, n, 5e-3, 0.3);
    const auto inf = std::numeric_limits<double>::infinity();
    const auto alone = run(scene_of({a}, inf), spec, n);
    const auto both = run(scene_of({a, b}, inf), spec, n);
    const auto dets = detect_targets(to_range_profiles(both, 0.0));
    ASSERT_EQ(dets.size(), 2u);
    const std::size_t which = dets[0].range_m < dets[1].range_m ? 0 : 1;
    const auto ref_dets = detect_targets(to_range_profiles(alone, 0.0));
    ASSERT_EQ(ref_dets.size(), 1u);
    const auto x = extract_target_series(both, dets, which);
    const auto x_alone = extract_target_series(alone, ref_dets, 0);
    double leak = 0.0, sig = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        leak += std::norm(x[i] - x_alone[i]);
        sig += std::norm(x_alone[i]);
    }
    EXPECT_LT(10.0 * std::log10(leak / sig), -40.0);
    EXPECT_THROW(extract_target_series(both, dets, 5), ConfigError);
}

TEST(Ranging, ClutterSuppressionRemovesStaticReturns) {
    WaveformSpec spec;
    auto s = scene_of({person(2.0, 100, 4e-3)}, std::numeric_limits<double>::infinity());
    s.static_clutter.push_back({1.0, 0.9});
    const auto series = run(s, spec, 100);
    const auto plain = detect_targets(to_range_profiles(series, 0.0));
    ASSERT_FALSE(plain.empty());
    EXPECT_NEAR(plain[0].range_m, 1.0, 0.06);
    const auto suppressed = detect_targets(to_range_profiles(suppress_static_clutter(series), 0.0));
    ASSERT_FALSE(suppressed.empty());
    EXPECT_NEAR(suppressed[0].range_m, 2.0, 0.06);
}
