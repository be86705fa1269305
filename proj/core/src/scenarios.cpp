#include "jcv/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "jcv/waveform.hpp"

namespace jcv {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::vector<std::size_t> range_order(const ScenarioConfig& c) {
    std::vector<std::size_t> order(c.targets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return c.targets[a].range_m < c.targets[b].range_m; });
    return order;
}

constexpr double kMaxRawSamples = 67108864.0;  // 1 GiB of complex doubles

std::size_t raw_frame_count(const ScenarioConfig& c) {
    const double frames = std::round(c.duration_s * c.frame_rate_hz * static_cast<double>(c.averaging_factor));
    if (frames * static_cast<double>(c.waveform.samples_per_pulse) > kMaxRawSamples)
        throw ConfigError("scenario needs " + std::to_string(static_cast<long long>(frames)) +
                          " raw frames; reduce duration_s, frame_rate_hz or averaging_factor");
    return static_cast<std::size_t>(std::max(frames, 1.0));
}

VitalParams person(double br_bpm, double hr_bpm) {
    VitalParams v;
    v.breathing_rate_hz = br_bpm / 60.0;
    v.heart_rate_hz = hr_bpm / 60.0;
    return v;
}

TargetConfig seated(double range_m, double br_bpm, double hr_bpm) {
    TargetConfig t;
    t.range_m = range_m;
    t.vitals = person(br_bpm, hr_bpm);
    return t;
}

ScenarioConfig single(std::string name, std::string description, TargetConfig target) {
    ScenarioConfig c;
    c.name = std::move(name);
    c.description = std::move(description);
    c.snr_db = library_snr_db(target.range_m);
    c.targets.push_back(std::move(target));
    c.analysis.detection.max_targets = 1;
    return c;
}

/// Several people share one SNR reference (the nearest); farther people
/// return less power with the fourth power of range.
ScenarioConfig group(std::string name, std::string description, std::vector<TargetConfig> people) {
    ScenarioConfig c;
    c.name = std::move(name);
    c.description = std::move(description);
    double nearest = people.front().range_m;
    for (const auto& p : people) nearest = std::min(nearest, p.range_m);
    for (auto& p : people) p.reflectivity *= (nearest / p.range_m) * (nearest / p.range_m);
    c.snr_db = library_snr_db(nearest);
    c.targets = std::move(people);
    c.analysis.detection.max_targets = c.targets.size();
    return c;
}

using Builder = std::function<ScenarioConfig()>;

const std::vector<std::pair<std::string, Builder>>& library() {
    static const std::vector<std::pair<std::string, Builder>> lib = [] {
        std::vector<std::pair<std::string, Builder>> v;
        auto add = [&](std::string name, Builder b) { v.emplace_back(std::move(name), std::move(b)); };

        // Sitting still on a chair, facing the radar.
        const double sit_ref[4][2] = {{19, 77.4}, {16, 68.0}, {19, 77.4}, {14, 75.3}};
        for (int d = 1; d <= 4; ++d) {
            const auto name = "sitting_still_" + std::to_string(d) + "m";
            add(name, [=] {
                return single(name, "seated, facing the radar at " + std::to_string(d) + " m",
                              seated(d, sit_ref[d - 1][0], sit_ref[d - 1][1]));
            });
        }
        add("sitting_sweatshirt_2m", [] {
            auto t = seated(2.0, 17, 74.7);
            t.nlos_attenuation_db = 1.5;
            return single("sitting_sweatshirt_2m", "seated at 2 m wearing a sweatshirt", t);
        });
        add("sitting_sweatshirt_4m", [] {
            auto t = seated(4.0, 16, 70.9);
            t.nlos_attenuation_db = 1.5;
            return single("sitting_sweatshirt_4m", "seated at 4 m wearing a sweatshirt", t);
        });
        add("holding_breath", [] {
            auto t = seated(1.5, 16, 74.4);
            t.schedule.push_back({0.0, 40.0, SegmentLabel::BreathHold});
            return single("holding_breath", "seated at 1.5 m holding the breath for the whole record", t);
        });

        // Desk work, radar 30 degrees off the body axis.
        add("intermittent_breathing", [] {
            auto t = seated(1.2, 23, 73.2);
            t.vitals.projection_angle_deg = 30.0;
            t.schedule = {{8.0, 16.0, SegmentLabel::BreathHold}, {26.0, 33.0, SegmentLabel::BreathHold}};
            return single("intermittent_breathing", "at a desk, periodically holding the breath", t);
        });
        add("desk_still_30deg", [] {
            auto t = seated(1.2, 18, 73.8);
            t.vitals.projection_angle_deg = 30.0;
            return single("desk_still_30deg", "sitting still at a desk, radar at 30 degrees", t);
        });
        add("desk_moving_30deg", [] {
            auto t = seated(1.2, 18, 72.0);
            t.vitals.projection_angle_deg = 30.0;
            t.vitals.sway_rms_m = 4e-3;
            return single("desk_moving_30deg", "reading at a desk, moving head and arms", t);
        });

        // Rotation angle, radar at 2 m.
        const std::vector<std::tuple<int, double, double>> angles = {
            {-180, 16, 73.0}, {-90, 18, 73.0}, {-60, 16, 73.0}, {-30, 16, 73.8},
            {0, 18, 73.2},    {30, 18, 73.8},  {60, 15, 78.7},  {90, 15, 81.1}};
        for (const auto& [deg, br, hr] : angles) {
            const auto name = "angle_" + (deg < 0 ? "m" + std::to_string(-deg) : std::to_string(deg));
            add(name, [=] {
                auto t = seated(2.0, br, hr);
                t.vitals.projection_angle_deg = deg;
                return single(name, "seated at 2 m, rotated " + std::to_string(deg) + " degrees", t);
            });
        }

        add("standing_still", [] {
            return single("standing_still", "standing still at 2 m", seated(2.0, 16, 75.0));
        });
        add("standing_motion", [] {
            auto t = seated(2.0, 16, 75.0);
            t.vitals.sway_rms_m = 3e-3;
            return single("standing_motion", "standing at 2 m with small natural gestures", t);
        });

        // Lying, radar mounted above the bed.
        add("lying_tshirt", [] {
            auto t = seated(1.2, 14, 59.0);
            t.vitals.breathing_amplitude_m = 4e-3;
            return single("lying_tshirt", "lying under the radar in a T-shirt", t);
        });
        add("lying_blanket_sweatshirt", [] {
            auto t = seated(1.2, 14, 56.3);
            t.vitals.breathing_amplitude_m = 4e-3;
            t.nlos_attenuation_db = 3.0;
            return single("lying_blanket_sweatshirt", "lying under the radar with a sweatshirt and thick blanket", t);
        });

        for (const auto& [name, speed] : {std::pair{"walking_slow", 0.2}, std::pair{"walking_fast", 0.4}}) {
            const std::string n = name;
            const double s = speed;
            add(n, [=] {
                auto t = seated(1.0, 16, 90.0);
                t.walking_speed_mps = s;
                auto c = single(n, "walking away from and back towards the radar", t);
                c.duration_s = 20.0;
                return c;
            });
        }

        add("nlos", [] {
            auto t = seated(2.0, 16, 73.0);
            t.nlos_attenuation_db = 15.0;
            auto c = single("nlos", "standing behind an obstacle that blocks the line of sight", t);
            // The obstacle itself reflects from the same range cell.
            c.clutter.push_back({1.95, 0.67});
            return c;
        });

        add("two_persons", [] {
            auto near = seated(1.6, 16, 73.6);
            auto far = seated(3.44, 19, 87.0);
            far.vitals.breathing_harmonic_weights = {0.3, 0.3};
            far.vitals.heart_amplitude_m = 0.25e-3;
            return group("two_persons", "two people seated at 1.6 m and 3.44 m", {near, far});
        });
        add("three_persons", [] {
            auto c = group("three_persons", "three people seated at 1.6 m, 2.5 m and 3.44 m",
                           {seated(1.6, 16, 74.0), seated(2.5, 18, 70.0), seated(3.44, 19, 87.0)});
            return c;
        });
        add("empty_room", [] {
            ScenarioConfig c;
            c.name = "empty_room";
            c.description = "no people and no clutter";
            return c;
        });
        return v;
    }();
    return lib;
}

}  // namespace

double library_snr_db(double range_m) { return 20.0 - 40.0 * std::log10(range_m / 2.0); }

std::vector<ScenarioInfo> builtin_scenarios() {
    std::vector<ScenarioInfo> out;
    for (const auto& [name, build] : library()) out.push_back({name, build().description});
    return out;
}

ScenarioConfig builtin_scenario(std::string_view name) {
    for (const auto& [n, build] : library())
        if (n == name) {
            auto c = build();
            c.validate();
            return c;
        }
    throw ConfigError("unknown scenario '" + std::string(name) + "' (see list-scenarios)");
}

Scene build_scene(const ScenarioConfig& config, std::vector<DisplacementTrace>* traces) {
    config.validate();
    const double raw_rate = config.frame_rate_hz * static_cast<double>(config.averaging_factor);
    Scene scene;
    scene.frame_rate_hz = raw_rate;
    scene.snr_db = config.snr_db;
    scene.cable_delay_range_m = config.cable_delay_m;
    scene.static_clutter = config.clutter;
    std::size_t id = 0;
    for (const auto idx : range_order(config)) {
        const auto& t = config.targets[idx];
        const auto seed = splitmix64(config.seed ^ splitmix64(0x7a9e7 + idx));
        SceneTarget st;
        st.rest_range_m = t.range_m;
        st.reflectivity = t.reflectivity;
        st.nlos_attenuation_db = t.nlos_attenuation_db;
        st.trace = t.walking_speed_mps > 0.0
                       ? walking_trajectory(t.range_m, t.walking_speed_mps, config.duration_s, raw_rate, t.vitals, seed)
                       : synthesize_displacement(t.vitals, config.duration_s, raw_rate, t.schedule, seed);
        if (traces) traces->push_back(st.trace);
        scene.targets.push_back(std::move(st));
        ++id;
    }
    return scene;
}

std::vector<TruthRecord> ground_truth(const ScenarioConfig& config) {
    std::vector<TruthRecord> out;
    std::size_t id = 0;
    for (const auto idx : range_order(config)) {
        const auto& t = config.targets[idx];
        TruthRecord r;
        r.scenario = config.name;
        r.target_id = id++;
        r.range_m = t.range_m;
        double held = 0.0;
        for (const auto& e : t.schedule)
            if (e.label == SegmentLabel::BreathHold) held += std::min(e.end_s, config.duration_s) - e.start_s;
        const bool breathes = t.vitals.breathing_amplitude_m > 0.0 && held < 0.5 * config.duration_s;
        if (breathes) r.br_bpm = 60.0 * t.vitals.breathing_rate_hz;
        if (t.vitals.heart_amplitude_m > 0.0) r.hr_bpm = 60.0 * t.vitals.heart_rate_hz;
        out.push_back(r);
    }
    return out;
}

SimulationResult simulate_scenario(const ScenarioConfig& config) {
    SimulationResult out;
    const auto frames = raw_frame_count(config);
    const auto scene = build_scene(config, &out.traces);
    const auto symbol = build_waveform(config.waveform);
    out.capture = simulate_capture(scene, symbol, config.waveform, frames, config.seed);
    out.truth = ground_truth(config);
    return out;
}

AnalysisConfig analysis_for_capture(const ScenarioConfig& config, std::size_t averaging_factor) {
    AnalysisConfig a = config.analysis;
    a.averaging_factor = std::max<std::size_t>(averaging_factor, 1);
    return a;
}

}  // namespace jcv
