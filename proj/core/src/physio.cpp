#include "jcv/physio.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "jcv/common.hpp"
#include "jcv/fft.hpp"

namespace jcv {
namespace {

constexpr double kHeartPulseWidthCycles = 0.3;
constexpr double kHoldTaperSeconds = 1.0;
constexpr double kSwayBandHz = 0.1;

std::size_t sample_count(double duration_s, double frame_rate_hz) {
    return static_cast<std::size_t>(std::llround(duration_s * frame_rate_hz));
}

double breathing_shape(double theta, const std::array<double, 2>& w) {
    return std::sin(theta) + w[0] * std::sin(2.0 * theta) + w[1] * std::sin(3.0 * theta);
}

/// Half of the peak-to-peak excursion of breathing_shape over one cycle.
double breathing_half_span(const std::array<double, 2>& w) {
    constexpr int kGrid = 8192;
    double lo = 0.0;
    double hi = 0.0;
    for (int i = 0; i < kGrid; ++i) {
        const double v = breathing_shape(2.0 * kPi * i / kGrid, w);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return 0.5 * (hi - lo);
}

std::vector<Segment> segments_from_schedule(const std::vector<ScheduleEntry>& schedule,
                                            std::size_t n, double rate) {
    std::vector<SegmentLabel> labels(n, SegmentLabel::Normal);
    for (const auto& e : schedule) {
        if (!(e.end_s > e.start_s)) throw ConfigError("schedule: segment end must follow start");
        const auto a = std::min(n, static_cast<std::size_t>(std::max(0.0, std::ceil(e.start_s * rate))));
        const auto b = std::min(n, static_cast<std::size_t>(std::max(0.0, std::ceil(e.end_s * rate))));
        std::fill(labels.begin() + static_cast<std::ptrdiff_t>(a),
                  labels.begin() + static_cast<std::ptrdiff_t>(b), e.label);
    }
    std::vector<Segment> segments;
    for (std::size_t i = 0; i < n; ++i) {
        if (segments.empty() || segments.back().label != labels[i])
            segments.push_back({i, i + 1, labels[i]});
        else
            segments.back().end = i + 1;
    }
    return segments;
}

/// 0 inside breath holds, ramping to 1 within kHoldTaperSeconds outside them.
std::vector<double> breathing_envelope(const std::vector<Segment>& segments, std::size_t n,
                                       double rate) {
    std::vector<double> distance(n, std::numeric_limits<double>::infinity());
    for (const auto& s : segments) {
        if (s.label != SegmentLabel::BreathHold) continue;
        for (std::size_t i = 0; i < n; ++i) {
            double d = 0.0;
            if (i < s.start) d = static_cast<double>(s.start - i) / rate;
            else if (i >= s.end) d = static_cast<double>(i - s.end + 1) / rate;
            distance[i] = std::min(distance[i], d);
        }
    }
    std::vector<double> env(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = distance[i];
        env[i] = d >= kHoldTaperSeconds ? 1.0 : 0.5 * (1.0 - std::cos(kPi * d / kHoldTaperSeconds));
    }
    return env;
}

std::vector<double> sway_noise(std::size_t n, double rate, double rms, std::mt19937_64& rng) {
    std::vector<double> out(n, 0.0);
    if (rms <= 0.0 || n < 4) return out;
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * kPi);
    std::vector<cd> spectrum(n, cd{0.0, 0.0});
    const double df = rate / static_cast<double>(n);
    for (std::size_t k = 1; k < n / 2; ++k) {
        const double f = static_cast<double>(k) * df;
        if (f > kSwayBandHz) break;
        const auto c = std::polar(1.0 / std::sqrt(f), phase_dist(rng));
        spectrum[k] = c;
        spectrum[n - k] = std::conj(c);
    }
    const auto time = fft::inverse(spectrum);
    double power = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = time[i].real();
        power += out[i] * out[i];
    }
    if (power <= 0.0) return out;  // record too short to hold a sway bin
    const double scale = rms / std::sqrt(power / static_cast<double>(n));
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace

double VitalParams::projection_factor() const {
    if (std::abs(projection_angle_deg) >= 90.0) return 0.0;
    return std::cos(projection_angle_deg * kPi / 180.0);
}

void VitalParams::validate() const {
    if (!(breathing_rate_hz >= 0.1 && breathing_rate_hz <= 0.7))
        throw ConfigError("vitals: breathing rate must lie in [0.1, 0.7] Hz");
    if (!(heart_rate_hz >= 0.7 && heart_rate_hz <= 3.0))
        throw ConfigError("vitals: heart rate must lie in [0.7, 3.0] Hz");
    if (!(breathing_amplitude_m >= 0.0) || !(heart_amplitude_m >= 0.0) || !(sway_rms_m >= 0.0))
        throw ConfigError("vitals: amplitudes must be non-negative");
    for (double w : breathing_harmonic_weights)
        if (!(std::abs(w) <= 1.0)) throw ConfigError("vitals: harmonic weights must satisfy |w| <= 1");
    if (!std::isfinite(projection_angle_deg)) throw ConfigError("vitals: projection angle must be finite");
}

std::string_view to_string(SegmentLabel label) {
    switch (label) {
        case SegmentLabel::Normal: return "normal";
        case SegmentLabel::BreathHold: return "breath_hold";
        case SegmentLabel::Moving: return "moving";
    }
    return "normal";
}

SegmentLabel segment_label_from_string(std::string_view name) {
    if (name == "normal") return SegmentLabel::Normal;
    if (name == "breath_hold") return SegmentLabel::BreathHold;
    if (name == "moving") return SegmentLabel::Moving;
    throw ConfigError("unknown segment label '" + std::string(name) + "'");
}

SegmentLabel DisplacementTrace::label_at(std::size_t index) const {
    for (const auto& s : segments)
        if (index >= s.start && index < s.end) return s.label;
    return SegmentLabel::Normal;
}

DisplacementTrace synthesize_displacement(const VitalParams& params, double duration_s,
                                          double frame_rate_hz,
                                          const std::vector<ScheduleEntry>& schedule,
                                          std::uint64_t seed) {
    params.validate();
    if (!(duration_s > 0.0)) throw ConfigError("synthesize_displacement: duration must be positive");
    if (!(frame_rate_hz >= 10.0 * params.heart_rate_hz))
        throw ConfigError("synthesize_displacement: frame rate " + std::to_string(frame_rate_hz) +
                          " Hz is below 10x the heart rate");

    const auto n = sample_count(duration_s, frame_rate_hz);
    DisplacementTrace trace;
    trace.sample_rate_hz = frame_rate_hz;
    trace.samples.assign(n, 0.0);
    trace.segments = segments_from_schedule(schedule, n, frame_rate_hz);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double breathing_phase0 = 2.0 * kPi * unit(rng);
    const double heart_t0 = unit(rng) / params.heart_rate_hz;

    const double scale = params.projection_factor();
    const double breath_gain = params.breathing_amplitude_m / breathing_half_span(params.breathing_harmonic_weights);
    const auto envelope = breathing_envelope(trace.segments, n, frame_rate_hz);

    const double beat_period = 1.0 / params.heart_rate_hz;
    const double pulse_width = kHeartPulseWidthCycles * beat_period;

    const auto sway = sway_noise(n, frame_rate_hz, params.sway_rms_m, rng);

    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / frame_rate_hz;
        const double theta = 2.0 * kPi * params.breathing_rate_hz * t + breathing_phase0;
        const double breathing = envelope[i] * breath_gain * breathing_shape(theta, params.breathing_harmonic_weights);

        // Distance to the nearest beat centre.
        const double u = t - heart_t0;
        const double dt = u - beat_period * std::round(u / beat_period);
        double pulse = 0.0;
        if (std::abs(dt) < 0.5 * pulse_width) pulse = 0.5 * (1.0 + std::cos(2.0 * kPi * dt / pulse_width));
        const double heart = params.heart_amplitude_m * (2.0 * pulse - 1.0);

        trace.samples[i] = scale * (breathing + heart + sway[i]);
    }
    return trace;
}

DisplacementTrace walking_trajectory(double start_range_m, double speed_mps, double duration_s,
                                     double frame_rate_hz) {
    if (!(speed_mps >= 0.0)) throw ConfigError("walking_trajectory: speed must be non-negative");
    if (!(duration_s > 0.0) || !(frame_rate_hz > 0.0))
        throw ConfigError("walking_trajectory: duration and frame rate must be positive");
    if (!(start_range_m > 0.0)) throw ConfigError("walking_trajectory: start range must be positive");

    const auto n = sample_count(duration_s, frame_rate_hz);
    DisplacementTrace trace;
    trace.sample_rate_hz = frame_rate_hz;
    trace.samples.resize(n);
    const double half = 0.5 * duration_s;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / frame_rate_hz;
        trace.samples[i] = speed_mps * (t <= half ? t : duration_s - t);
    }
    if (n > 0) trace.segments.push_back({0, n, SegmentLabel::Moving});
    return trace;
}

DisplacementTrace walking_trajectory(double start_range_m, double speed_mps, double duration_s,
                                     double frame_rate_hz, const VitalParams& vitals,
                                     std::uint64_t seed) {
    auto trace = walking_trajectory(start_range_m, speed_mps, duration_s, frame_rate_hz);
    const auto body = synthesize_displacement(vitals, duration_s, frame_rate_hz, {}, seed);
    for (std::size_t i = 0; i < trace.samples.size() && i < body.samples.size(); ++i)
        trace.samples[i] += body.samples[i];
    return trace;
}

}  // namespace jcv
