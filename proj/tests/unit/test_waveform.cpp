#include <gtest/gtest.h>

#include <random>

#include "jcv/common.hpp"
#include "jcv/fft.hpp"
#include "jcv/waveform.hpp"
#include "oracles.hpp"

using namespace jcv;

namespace {

std::vector<cd> random_vector(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cd> v(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

BasebandSymbol tones(std::size_t p, std::vector<std::size_t> bins) {
    BasebandSymbol s;
    std::vector<cd> grid(p);
    for (auto b : bins) grid[b] = 1.0;
    s.time_domain = oracle::dft(grid, +1);
    return s;
}

}  // namespace

TEST(Fft, MatchesNaiveDft) {
    for (std::size_t n : {1u, 2u, 7u, 64u, 250u}) {
        const auto x = random_vector(n, static_cast<unsigned>(n));
        const auto fwd = fft::forward(x);
        const auto inv = fft::inverse(x);
        const auto ref_fwd = oracle::dft(x, -1);
        const auto ref_inv = oracle::dft(x, +1);
        for (std::size_t k = 0; k < n; ++k) {
            EXPECT_NEAR(std::abs(fwd[k] - ref_fwd[k]), 0.0, 1e-9 * static_cast<double>(n));
            EXPECT_NEAR(std::abs(inv[k] - ref_inv[k]), 0.0, 1e-9 * static_cast<double>(n));
        }
    }
}

TEST(Fft, ParsevalOnRandomData) {
    const auto x = random_vector(2500, 3);
    const auto y = fft::forward(x);
    EXPECT_NEAR(oracle::energy(y) / 2500.0, oracle::energy(x), 1e-9 * oracle::energy(x));
}

TEST(Waveform, DefaultSpecGeometry) {
    WaveformSpec spec;
    EXPECT_DOUBLE_EQ(spec.subcarrier_spacing_hz(), 1e6);
    EXPECT_DOUBLE_EQ(spec.sample_rate_hz(), 2.5e9);
    EXPECT_NEAR(spec.occupied_bandwidth_hz(), 1.024e9, 1.0);
    EXPECT_NEAR(kSpeedOfLight / (2.0 * spec.occupied_bandwidth_hz()), 0.1464, 1e-4);
    EXPECT_NEAR(spec.wavelength_m(), 0.011313, 1e-6);
}

TEST(Waveform, UnitActiveZeroInactiveAndParseval) {
    for (std::size_t count : {1u, 10u, 40u, 1024u}) {
        const auto spec = select_subcarriers(WaveformSpec{}, count);
        const auto s = build_waveform(spec);
        ASSERT_EQ(s.freq_domain.size(), spec.num_subcarriers);
        ASSERT_EQ(s.time_domain.size(), spec.samples_per_pulse);
        for (std::size_t i = 0; i < spec.num_subcarriers; ++i) {
            if (spec.active.contains(i))
                EXPECT_NEAR(std::abs(s.freq_domain[i]), 1.0, 1e-15);
            else
                EXPECT_EQ(s.freq_domain[i], cd{});
        }
        const double ef = oracle::energy(s.freq_domain);
        EXPECT_NEAR(oracle::energy(s.time_domain), ef, 1e-9 * ef);
    }
}

TEST(Waveform, TimeDomainIsUnitaryInverseOfGrid) {
    auto spec = select_subcarriers(WaveformSpec{}, 40);
    spec.samples_per_pulse = 250;
    spec.num_subcarriers = 100;
    spec.active = centered_band(100, 40);
    const auto s = build_waveform(spec);
    std::vector<cd> grid(spec.samples_per_pulse);
    for (std::size_t i = spec.active.first; i < spec.active.first + spec.active.count; ++i)
        grid[spec.subcarrier_bin(i)] = s.freq_domain[i];
    auto ref = oracle::dft(grid, +1);
    for (auto& v : ref) v /= std::sqrt(250.0);
    for (std::size_t n = 0; n < ref.size(); ++n) EXPECT_NEAR(std::abs(ref[n] - s.time_domain[n]), 0.0, 1e-12);
}

TEST(Waveform, QuadraticPhaseProfileValues) {
    WaveformSpec spec;
    const auto s = build_waveform(spec);
    for (std::size_t m : {0u, 1u, 5u, 511u, 1023u}) {
        const double expected = oracle::wrap(kPi * static_cast<double>(m * m) / 1024.0);
        EXPECT_NEAR(oracle::wrap(std::arg(s.freq_domain[m]) - expected), 0.0, 1e-9) << m;
    }
}

TEST(Waveform, BuildIsPure) {
    WaveformSpec spec;
    EXPECT_EQ(build_waveform(spec), build_waveform(spec));
}

TEST(Waveform, RejectsEmptyBandAndBadSpecs) {
    WaveformSpec spec;
    spec.active = {512, 0};
    EXPECT_THROW(build_waveform(spec), ConfigError);
    spec = WaveformSpec{};
    spec.samples_per_pulse = 1000;
    EXPECT_THROW(build_waveform(spec), ConfigError);
    spec = WaveformSpec{};
    spec.pulse_duration_s = 0.0;
    EXPECT_THROW(spec.validate(), ConfigError);
    spec = WaveformSpec{};
    spec.active = {0, 10};
    EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(Papr, SingleToneIsZeroDb) {
    const auto spec = select_subcarriers(WaveformSpec{}, 1);
    EXPECT_NEAR(papr_db(build_waveform(spec)), 0.0, 1e-9);
    EXPECT_NEAR(papr_db(tones(64, {5})), 0.0, 1e-9);
}

TEST(Papr, TwoEqualTonesIs3dB) {
    EXPECT_NEAR(papr_db(tones(64, {3, 11})), 10.0 * std::log10(2.0), 1e-9);
    EXPECT_NEAR(10.0 * std::log10(2.0), 3.0103, 1e-4);
}

TEST(Papr, QuadraticFullBandAtMost6dBAndMatchesScan) {
    const auto s = build_waveform(WaveformSpec{});
    const double p = papr_db(s);
    EXPECT_LE(p, 6.0);
    EXPECT_NEAR(p, oracle::papr_db(s.time_domain), 1e-12);
}

TEST(Papr, ZeroPhaseFullBandAtLeast20dB) {
    WaveformSpec spec;
    spec.phase_profile = PhaseProfile::Zero;
    const auto s = build_waveform(spec);
    EXPECT_GE(papr_db(s), 20.0);
    EXPECT_NEAR(papr_db(s), oracle::papr_db(s.time_domain), 1e-12);
}

TEST(Papr, RejectsZeroSymbol) {
    BasebandSymbol s;
    EXPECT_THROW(papr_db(s), ConfigError);
    s.time_domain.assign(8, cd{});
    EXPECT_THROW(papr_db(s), ConfigError);
}

TEST(SelectSubcarriers, CenteredMonotoneAndIdempotent) {
    const WaveformSpec full;
    EXPECT_EQ(select_subcarriers(full, 1024), full);
    EXPECT_EQ(select_subcarriers(select_subcarriers(full, 1024), 1024), full);
    double previous = 0.0;
    for (std::size_t c = 1; c <= 1024; c += 37) {
        const auto s = select_subcarriers(full, c);
        EXPECT_NO_THROW(s.validate());
        EXPECT_EQ(s.active.count, c);
        EXPECT_GT(s.occupied_bandwidth_hz(), previous);
        previous = s.occupied_bandwidth_hz();
        const auto mask = s.active_mask();
        EXPECT_EQ(static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)), c);
    }
    EXPECT_NEAR(select_subcarriers(full, 10).occupied_bandwidth_hz(), 10e6, 1e-3);
    EXPECT_THROW(select_subcarriers(full, 1025), ConfigError);
    EXPECT_THROW(select_subcarriers(full, 0), ConfigError);
}
