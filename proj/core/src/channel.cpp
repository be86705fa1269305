#include "jcv/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "jcv/fft.hpp"

namespace jcv {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// exp(-j 2 pi f tau) with the whole cycles removed before scaling by 2 pi.
cd delay_phasor(double frequency_hz, double delay_s) {
    const double cycles = frequency_hz * delay_s;
    const double frac = cycles - std::floor(cycles);
    return std::polar(1.0, -2.0 * kPi * frac);
}

void check_range(double range_m, double limit_m, const std::string& what) {
    if (!(range_m < limit_m))
        throw ConfigError(what + " at " + std::to_string(range_m) +
                          " m exceeds the unambiguous range of " + std::to_string(limit_m) + " m");
}

}  // namespace

double SceneTarget::amplitude() const {
    return reflectivity * std::pow(10.0, -nlos_attenuation_db / 20.0);
}

double noise_variance_per_sample(const Scene& scene, const WaveformSpec& spec) {
    if (std::isinf(scene.snr_db) && scene.snr_db > 0.0) return 0.0;
    double reference = 1.0;
    if (!scene.targets.empty()) {
        reference = 0.0;
        for (const auto& t : scene.targets) reference = std::max(reference, t.reflectivity);
    }
    // The CIR peak of a point target with amplitude a is a, and the CIR noise
    // variance is sigma^2 / K for K active subcarriers.
    const double k_active = static_cast<double>(spec.active.count);
    return reference * reference * k_active / std::pow(10.0, scene.snr_db / 10.0);
}

std::vector<cd> point_channel(const WaveformSpec& spec,
                              const std::vector<std::pair<double, double>>& reflectors) {
    std::vector<cd> h(spec.num_subcarriers, cd{0.0, 0.0});
    for (std::size_t i = spec.active.first; i < spec.active.first + spec.active.count; ++i) {
        const double f = spec.carrier_frequency_hz + spec.subcarrier_offset_hz(i);
        cd acc{0.0, 0.0};
        for (const auto& [amp, range] : reflectors) acc += amp * delay_phasor(f, round_trip_delay(range));
        h[i] = acc;
    }
    return h;
}

double max_unambiguous_range(const WaveformSpec& spec) {
    spec.validate();
    return kSpeedOfLight * spec.pulse_duration_s / 2.0;
}

SlowFastMatrix simulate_capture(const Scene& scene, const BasebandSymbol& symbol,
                                const WaveformSpec& spec, std::size_t n_frames,
                                std::uint64_t seed) {
    spec.validate();
    if (symbol.freq_domain.size() != spec.num_subcarriers ||
        symbol.time_domain.size() != spec.samples_per_pulse)
        throw ConfigError("simulate_capture: symbol does not match waveform spec");
    if (n_frames < 1) throw ConfigError("simulate_capture: need at least one frame");
    if (!(scene.frame_rate_hz > 0.0)) throw ConfigError("simulate_capture: frame rate must be positive");
    if (!(scene.cable_delay_range_m >= 0.0)) throw ConfigError("simulate_capture: cable offset must be >= 0");

    const double limit = max_unambiguous_range(spec);
    for (std::size_t t = 0; t < scene.targets.size(); ++t) {
        const auto& target = scene.targets[t];
        const auto name = "target " + std::to_string(t);
        if (!(target.rest_range_m > 0.0)) throw ConfigError(name + ": rest range must be positive");
        if (!(target.reflectivity >= 0.0 && target.reflectivity <= 1.0))
            throw ConfigError(name + ": reflectivity must lie in [0, 1]");
        if (!(target.nlos_attenuation_db >= 0.0)) throw ConfigError(name + ": NLOS attenuation must be >= 0 dB");
        if (target.trace.samples.size() < n_frames)
            throw ConfigError(name + ": displacement trace shorter than the capture");
        if (std::abs(target.trace.sample_rate_hz - scene.frame_rate_hz) > 1e-9 * scene.frame_rate_hz)
            throw ConfigError(name + ": trace sample rate differs from the scene frame rate");
        double worst = 0.0;
        for (std::size_t f = 0; f < n_frames; ++f) {
            const double d = target.trace.samples[f];
            if (!std::isfinite(d)) throw ConfigError(name + ": non-finite displacement");
            worst = std::max(worst, target.rest_range_m + d);
        }
        check_range(worst + scene.cable_delay_range_m, limit, name);
    }
    std::vector<std::pair<double, double>> clutter;
    for (const auto& c : scene.static_clutter) {
        if (!(c.range_m >= 0.0)) throw ConfigError("clutter range must be >= 0");
        check_range(c.range_m + scene.cable_delay_range_m, limit, "clutter");
        clutter.emplace_back(c.amplitude, c.range_m + scene.cable_delay_range_m);
    }
    const auto clutter_channel = point_channel(spec, clutter);

    const std::size_t p = spec.samples_per_pulse;
    const double unitary = 1.0 / std::sqrt(static_cast<double>(p));
    const double sigma = std::sqrt(noise_variance_per_sample(scene, spec) / 2.0);

    SlowFastMatrix out{ComplexMatrix(n_frames, p), scene.frame_rate_hz, spec};
    std::vector<cd> grid(p);
    std::vector<std::pair<double, double>> reflectors(scene.targets.size());

    for (std::size_t f = 0; f < n_frames; ++f) {
        for (std::size_t t = 0; t < scene.targets.size(); ++t) {
            const auto& target = scene.targets[t];
            reflectors[t] = {target.amplitude(),
                             target.rest_range_m + target.trace.samples[f] + scene.cable_delay_range_m};
        }
        const auto h = point_channel(spec, reflectors);

        std::fill(grid.begin(), grid.end(), cd{0.0, 0.0});
        for (std::size_t i = spec.active.first; i < spec.active.first + spec.active.count; ++i)
            grid[spec.subcarrier_bin(i)] = symbol.freq_domain[i] * (h[i] + clutter_channel[i]);

        auto row = out.frames.row(f);
        fft::inverse(grid, row);
        for (auto& x : row) x *= unitary;

        if (sigma > 0.0) {
            // Independent stream per frame: output does not depend on frame order.
            std::mt19937_64 rng(splitmix64(seed ^ splitmix64(f)));
            std::normal_distribution<double> normal(0.0, sigma);
            for (auto& x : row) x += cd{normal(rng), normal(rng)};
        }
    }
    return out;
}

}  // namespace jcv
