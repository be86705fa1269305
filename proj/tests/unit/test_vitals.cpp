#include <gtest/gtest.h>

#include <random>

#include "jcv/common.hpp"
#include "jcv/vitals.hpp"
#include "oracles.hpp"

using namespace jcv;

namespace {

PhaseTrack track_of(std::vector<double> phase, double fs = 50.0) {
    PhaseTrack t;
    t.sample_rate_hz = fs;
    t.unwrapped_phase = std::move(phase);
    return t;
}

std::vector<double> tones(std::size_t n, double fs, std::vector<std::pair<double, double>> parts, double noise = 0.0,
                          unsigned seed = 1) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, noise > 0.0 ? noise : 1.0);
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        for (const auto& [f, a] : parts) x[i] += a * std::sin(2.0 * kPi * f * t + 0.3);
        if (noise > 0.0) x[i] += g(rng);
    }
    return x;
}

std::vector<cd> to_series(const std::vector<double>& phase, cd scale = 1.0) {
    std::vector<cd> s(phase.size());
    for (std::size_t i = 0; i < phase.size(); ++i) s[i] = scale * std::polar(1.0, phase[i]);
    return s;
}

}  // namespace

TEST(Unwrap, InvertsWrappingForBoundedSteps) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> step(-0.99 * kPi, 0.99 * kPi);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> phi(500);
        phi[0] = 3.0 * step(rng);
        for (std::size_t i = 1; i < phi.size(); ++i) phi[i] = phi[i - 1] + step(rng);
        const auto t = phase_track(to_series(phi), 50.0);
        const double shift = t.unwrapped_phase[0] - phi[0];
        EXPECT_NEAR(oracle::wrap(shift), 0.0, 1e-9);
        for (std::size_t i = 0; i < phi.size(); ++i) EXPECT_NEAR(t.unwrapped_phase[i] - phi[i], shift, 1e-9);
    }
}

TEST(Unwrap, ZeroSamplesCarryPhase) {
    std::vector<cd> s{std::polar(1.0, 0.5), cd{}, std::polar(2.0, 0.7)};
    const auto t = phase_track(s, 10.0);
    EXPECT_EQ(t.zero_magnitude_samples, 1u);
    EXPECT_DOUBLE_EQ(t.unwrapped_phase[1], 0.5);
    EXPECT_NEAR(t.unwrapped_phase[2], 0.7, 1e-12);
    EXPECT_THROW(phase_track(std::vector<cd>{cd{1.0}}, 10.0), ConfigError);
    EXPECT_THROW(phase_track(s, 0.0), ConfigError);
}

TEST(Unwrap, DetrendOption) {
    std::vector<double> ramp(100);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.05 * static_cast<double>(i);
    const auto t = phase_track(to_series(ramp), 10.0, true);
    EXPECT_TRUE(t.detrended);
    for (double v : t.unwrapped_phase) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(Displacement, PhaseScale) {
    const double lambda = kSpeedOfLight / 26.5e9;
    auto d = phase_to_displacement(track_of({0.0, 2.0 * kPi}), lambda);
    EXPECT_NEAR(std::abs(d[1] - d[0]), 5.657e-3, 1e-6);
    d = phase_to_displacement(track_of({0.0, 1.112}), lambda);
    EXPECT_NEAR(std::abs(d[1] - d[0]), 1.0e-3, 2e-6);
    // Phase falls as the target recedes.
    EXPECT_LT(d[1], d[0]);
    EXPECT_THROW(phase_to_displacement(track_of({0.0}), 0.0), ConfigError);
}

TEST(Detrend, RemovesLines) {
    std::vector<double> x(50);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 3.0 - 0.2 * static_cast<double>(i);
    for (double v : linear_detrend(x)) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Bandpass, PassbandStopbandAndDc) {
    const std::size_t n = 2000;
    const double fs = 50.0;
    auto gain_at = [&](double f, double lo, double hi) {
        // Use a whole number of cycles so the even extension is seamless.
        auto x = tones(n, fs, {{f, 1.0}});
        for (auto& v : x) v += 5.0;
        const auto y = bandpass(track_of(x, fs), lo, hi).unwrapped_phase;
        const auto mid_x = oracle::demean(std::span<const double>(x).subspan(400, 1200));
        const std::span<const double> mid_y(y.data() + 400, 1200);
        return oracle::rms(mid_y) / oracle::rms(mid_x);
    };
    EXPECT_NEAR(20.0 * std::log10(gain_at(0.25, 0.15, 0.5)), 0.0, 0.5);
    EXPECT_LT(20.0 * std::log10(gain_at(1.2, 0.15, 0.5)), -40.0);
    EXPECT_NEAR(20.0 * std::log10(gain_at(1.2, 0.8, 2.0)), 0.0, 0.5);
    EXPECT_LT(20.0 * std::log10(gain_at(0.25, 0.8, 2.0)), -40.0);

    std::vector<double> dc(n, 7.0);
    const auto y = bandpass(track_of(dc, fs), 0.15, 0.5).unwrapped_phase;
    for (double v : y) EXPECT_NEAR(v, 0.0, 1e-9);
    EXPECT_THROW(bandpass(track_of(dc, fs), 0.5, 0.15), ConfigError);
    EXPECT_THROW(bandpass(track_of(dc, fs), 0.15, 30.0), ConfigError);
}

TEST(Spectrum, GridAndToneAmplitude) {
    const auto x = tones(2000, 50.0, {{0.25, 2.0}});
    const auto s = magnitude_spectrum(x, 50.0, 4);
    EXPECT_NEAR(s.frequency_hz[1] - s.frequency_hz[0], 0.00625, 1e-12);
    EXPECT_EQ(s.frequency_hz.size(), 4001u);
    const auto it = std::max_element(s.magnitude.begin(), s.magnitude.end());
    EXPECT_NEAR(s.frequency_hz[static_cast<std::size_t>(it - s.magnitude.begin())], 0.25, 0.00625);
    EXPECT_NEAR(*it, 2.0, 0.02);
    // Oracle: windowed DTFT magnitude at the same grid point.
    std::vector<double> w(x.size());
    double wsum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / 1999.0);
        w[i] = h * x[i];
        wsum += h;
    }
    for (std::size_t k : {0u, 37u, 160u, 500u})
        EXPECT_NEAR(s.magnitude[k], 2.0 * oracle::dtft_mag(w, s.frequency_hz[k], 50.0) / wsum, 1e-9);
}

TEST(Spectrum, CorrelationProperties) {
    const auto a = magnitude_spectrum(tones(1000, 50.0, {{0.3, 1.0}}), 50.0, 4);
    EXPECT_NEAR(spectral_correlation(a, a), 1.0, 1e-12);
    const auto b = magnitude_spectrum(tones(1000, 50.0, {{1.3, 1.0}}), 50.0, 4);
    EXPECT_LT(spectral_correlation(a, b), 0.2);
    const auto c = magnitude_spectrum(tones(900, 50.0, {{0.3, 1.0}}), 50.0, 4);
    EXPECT_THROW(spectral_correlation(a, c), ConfigError);
}

TEST(Vitals, CleanRatesWithinResolution) {
    const double br = 16.0 / 60.0, hr = 73.0 / 60.0;
    const auto x = tones(2000, 50.0, {{br, 3.3}, {hr, 0.2}}, 0.01);
    const auto e = estimate_vitals(track_of(x));
    ASSERT_TRUE(e.br_bpm);
    ASSERT_TRUE(e.hr_bpm);
    const double bin_bpm = 60.0 * 50.0 / 8000.0;
    EXPECT_LE(std::abs(*e.br_bpm - 16.0), bin_bpm);
    EXPECT_LE(std::abs(*e.hr_bpm - 73.0), bin_bpm);
    EXPECT_LE(bin_bpm, 0.375);
    EXPECT_FALSE(e.harmonic_flag);
    EXPECT_GT(e.br_confidence, 0.4);
    EXPECT_GT(e.confidence(), 0.4);
    EXPECT_EQ(e.br_spectrum.frequency_hz.size(), e.br_spectrum.magnitude.size());
    EXPECT_NEAR(*std::max_element(e.hr_spectrum.magnitude.begin(), e.hr_spectrum.magnitude.end()), 1.0, 1e-12);
}

TEST(Vitals, NoiseOnlyReportsNothing) {
    const auto x = tones(2000, 50.0, {}, 0.1, 4);
    const auto e = estimate_vitals(track_of(x));
    EXPECT_FALSE(e.br_bpm);
    EXPECT_FALSE(e.hr_bpm);
    EXPECT_EQ(e.confidence(), 0.0);
}

TEST(Vitals, AbsentBreathingKeepsHeart) {
    const auto x = tones(2000, 50.0, {{1.1, 0.05}}, 0.005, 2);
    const auto e = estimate_vitals(track_of(x));
    EXPECT_FALSE(e.br_bpm);
    ASSERT_TRUE(e.hr_bpm);
    EXPECT_NEAR(*e.hr_bpm, 66.0, 0.375);
}

TEST(Vitals, ScaleInvariance) {
    const auto x = tones(2000, 50.0, {{0.3, 2.5}, {1.25, 0.2}}, 0.02, 6);
    const auto a = estimate_vitals(phase_track(to_series(x), 50.0));
    for (cd c : {cd{3.0, 0.0}, std::polar(0.01, 2.9), cd{-1.0, 0.0}}) {
        const auto b = estimate_vitals(phase_track(to_series(x, c), 50.0));
        ASSERT_EQ(a.br_bpm.has_value(), b.br_bpm.has_value());
        ASSERT_EQ(a.hr_bpm.has_value(), b.hr_bpm.has_value());
        EXPECT_NEAR(a.br_peak_hz, b.br_peak_hz, 1e-9);
        EXPECT_NEAR(a.hr_peak_hz, b.hr_peak_hz, 1e-9);
        EXPECT_NEAR(a.br_confidence, b.br_confidence, 1e-9);
        EXPECT_EQ(a.harmonic_flag, b.harmonic_flag);
    }
}

TEST(Vitals, HarmonicCollisionWithCompetitor) {
    // Breathing at 0.4 Hz whose 2nd and 3rd harmonics fall in the HR band,
    // the 3rd on top of a weak heart line.
    const auto x = tones(2000, 50.0, {{0.4, 3.0}, {0.8, 0.7}, {1.2, 0.9}, {1.2001, 0.02}}, 0.01, 8);
    const auto e = estimate_vitals(track_of(x));
    ASSERT_TRUE(e.br_bpm);
    EXPECT_NEAR(*e.br_bpm, 24.0, 0.375);
    EXPECT_TRUE(e.harmonic_flag);
    ASSERT_TRUE(e.harmonic_order);
    EXPECT_EQ(*e.harmonic_order, 3u);
    ASSERT_TRUE(e.hr_alternative_hz);
    EXPECT_NEAR(*e.hr_alternative_hz, 0.8, 0.00625);
    EXPECT_FALSE(e.hr_bpm);
}

TEST(Vitals, HarmonicWithoutCompetitorIsNotFlagged) {
    const auto x = tones(2000, 50.0, {{0.4, 3.0}, {1.2, 0.5}}, 0.01, 8);
    const auto e = estimate_vitals(track_of(x));
    EXPECT_FALSE(e.harmonic_flag);
    ASSERT_TRUE(e.hr_bpm);
    EXPECT_NEAR(*e.hr_bpm, 72.0, 0.375);
}

TEST(Vitals, DurationAndBandValidation) {
    EXPECT_THROW(estimate_vitals(track_of(std::vector<double>(500, 0.0))), DataError);
    VitalsConfig c;
    c.heart_band = {2.0, 0.8};
    EXPECT_THROW(estimate_vitals(track_of(tones(2000, 50.0, {{0.3, 1.0}})), c), ConfigError);
}
