#include <gtest/gtest.h>

#include "jcv/common.hpp"
#include "jcv/channel.hpp"
#include "jcv/receiver.hpp"
#include "oracles.hpp"

using namespace jcv;

namespace {

SceneTarget target(double range, std::size_t n, double rate, double reflectivity = 0.67,
                   std::vector<double> motion = {}) {
    SceneTarget t;
    t.rest_range_m = range;
    t.reflectivity = reflectivity;
    t.trace.sample_rate_hz = rate;
    t.trace.samples = motion.empty() ? std::vector<double>(n, 0.0) : std::move(motion);
    return t;
}

Scene quiet_scene() {
    Scene s;
    s.frame_rate_hz = 50.0;
    return s;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

}  // namespace

TEST(Channel, EmptySceneNoiselessIsZero) {
    WaveformSpec spec;
    const auto cap = simulate_capture(quiet_scene(), build_waveform(spec), spec, 3, 1);
    for (const auto& v : cap.frames.data()) EXPECT_EQ(v, cd{});
}

TEST(Channel, StaticTargetDelayByCrossCorrelation) {
    WaveformSpec spec;
    const auto sym = build_waveform(spec);
    auto scene = quiet_scene();
    scene.targets.push_back(target(2.0, 4, 50.0));
    const auto cap = simulate_capture(scene, sym, spec, 4, 1);
    for (std::size_t r = 1; r < 4; ++r)
        for (std::size_t c = 0; c < spec.samples_per_pulse; ++c) EXPECT_EQ(cap.frames(r, c), cap.frames(0, c));

    // Circular cross-correlation with the transmitted pulse, evaluated directly.
    const auto rx = cap.frames.row(0);
    const std::size_t p = spec.samples_per_pulse;
    double best = -1.0;
    std::size_t lag = 0;
    for (std::size_t l = 0; l < 80; ++l) {
        cd acc{0.0, 0.0};
        for (std::size_t n = 0; n < p; ++n) acc += rx[(n + l) % p] * std::conj(sym.time_domain[n]);
        if (std::abs(acc) > best) {
            best = std::abs(acc);
            lag = l;
        }
    }
    const double delay_s = 2.0 * 2.0 / kSpeedOfLight;
    EXPECT_NEAR(delay_s, 13.34e-9, 0.01e-9);
    EXPECT_NEAR(static_cast<double>(lag), delay_s * spec.sample_rate_hz(), 1.0);
}

TEST(Channel, PhaseFidelity) {
    WaveformSpec spec;
    const auto sym = build_waveform(spec);
    const std::size_t n = 40;
    std::vector<double> motion(n);
    for (std::size_t i = 0; i < n; ++i) motion[i] = 6e-3 * std::sin(2.0 * kPi * 0.25 * static_cast<double>(i) / 10.0);
    auto scene = quiet_scene();
    scene.frame_rate_hz = 10.0;
    scene.targets.push_back(target(2.3, n, 10.0, 0.5, motion));
    scene.cable_delay_range_m = 0.4;
    const auto est = estimate_channel(simulate_capture(scene, sym, spec, n, 1), sym);
    const double lambda = spec.wavelength_m();
    for (std::size_t i = 0; i < n; ++i) {
        const double range = 2.3 + 0.4 + motion[i];
        const double bin = round_trip_delay(range) * spec.sample_rate_hz();
        const cd h = impulse_at(est.transfer.row(i), spec, bin);
        EXPECT_NEAR(std::abs(h), 0.5, 1e-9);
        EXPECT_NEAR(oracle::wrap(std::arg(h) + 4.0 * kPi * range / lambda), 0.0, 1e-6) << i;
    }
}

TEST(Channel, CarrierPhaseSwingForBreathing) {
    // 6 mm half-excursion: 12 mm peak to peak.
    const double lambda = WaveformSpec{}.wavelength_m();
    EXPECT_NEAR(4.0 * kPi * 0.012 / lambda, 13.33, 0.01);
    EXPECT_NEAR(4.0 * kPi * 0.006 / lambda, 6.66, 0.01);
}

TEST(Channel, SuperpositionAtInfiniteSnr) {
    WaveformSpec spec;
    const auto sym = build_waveform(spec);
    std::vector<double> m(5);
    for (std::size_t i = 0; i < 5; ++i) m[i] = 1e-3 * static_cast<double>(i);
    auto a = quiet_scene();
    a.targets.push_back(target(1.6, 5, 50.0, 0.6, m));
    auto b = quiet_scene();
    b.targets.push_back(target(3.44, 5, 50.0, 0.4));
    b.static_clutter.push_back({2.7, 0.3});
    auto ab = quiet_scene();
    ab.targets = {a.targets[0], b.targets[0]};
    ab.static_clutter = b.static_clutter;
    const auto ca = simulate_capture(a, sym, spec, 5, 1);
    const auto cb = simulate_capture(b, sym, spec, 5, 1);
    const auto cab = simulate_capture(ab, sym, spec, 5, 1);
    ComplexMatrix sum = ca.frames;
    for (std::size_t i = 0; i < sum.data().size(); ++i) sum.data()[i] += cb.frames.data()[i];
    EXPECT_LT(max_abs_diff(sum, cab.frames), 1e-12);
}

TEST(Channel, SnrCalibration) {
    WaveformSpec spec;
    const auto sym = build_waveform(spec);
    auto clean = quiet_scene();
    clean.targets.push_back(target(2.0, 10, 50.0, 0.67));
    auto noisy = clean;
    noisy.snr_db = 15.0;
    const auto h0 = estimate_channel(simulate_capture(clean, sym, spec, 10, 7), sym);
    const auto h1 = estimate_channel(simulate_capture(noisy, sym, spec, 10, 7), sym);
    double power = 0.0;
    for (std::size_t i = 0; i < h0.impulse.data().size(); ++i) power += std::norm(h1.impulse.data()[i] - h0.impulse.data()[i]);
    power /= static_cast<double>(h0.impulse.data().size());
    const double measured_snr = 10.0 * std::log10(0.67 * 0.67 / power);
    EXPECT_NEAR(measured_snr, 15.0, 0.5);
}

TEST(Channel, NoiseIsDeterministicPerSeed) {
    WaveformSpec spec;
    const auto sym = build_waveform(spec);
    auto s = quiet_scene();
    s.snr_db = 10.0;
    s.targets.push_back(target(2.0, 3, 50.0));
    EXPECT_EQ(simulate_capture(s, sym, spec, 3, 5).frames, simulate_capture(s, sym, spec, 3, 5).frames);
    EXPECT_NE(simulate_capture(s, sym, spec, 3, 5).frames, simulate_capture(s, sym, spec, 3, 6).frames);
}

TEST(Channel, NlosAttenuatesAmplitude) {
    SceneTarget t;
    t.reflectivity = 0.67;
    t.nlos_attenuation_db = 15.0;
    EXPECT_NEAR(t.amplitude(), 0.67 * std::pow(10.0, -0.75), 1e-12);
}

TEST(Channel, RangeLimitsAndValidation) {
    WaveformSpec spec;
    EXPECT_NEAR(max_unambiguous_range(spec), 149.896, 1e-3);
    auto two = spec;
    two.pulse_duration_s = 2e-6;
    EXPECT_NEAR(max_unambiguous_range(two), 299.79, 1e-2);
    const auto sym = build_waveform(spec);
    auto s = quiet_scene();
    s.targets.push_back(target(160.0, 2, 50.0));
    EXPECT_THROW(simulate_capture(s, sym, spec, 2, 1), ConfigError);
    s.targets[0] = target(2.0, 1, 50.0);
    EXPECT_THROW(simulate_capture(s, sym, spec, 2, 1), ConfigError);
    s.targets[0] = target(2.0, 2, 50.0, 1.5);
    EXPECT_THROW(simulate_capture(s, sym, spec, 2, 1), ConfigError);
}
