#include "jcv/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace jcv {
namespace {

std::string where(std::string_view source, const YAML::Mark& mark) {
    std::string out(source);
    if (mark.line >= 0) out += ":" + std::to_string(mark.line + 1) + ":" + std::to_string(mark.column + 1);
    return out + ": ";
}

class Context {
public:
    explicit Context(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
        throw ConfigError(where(source_, node.Mark()) + msg);
    }

    void expect_map(const YAML::Node& node, const std::string& path,
                    std::initializer_list<std::string_view> keys) const {
        if (!node.IsMap()) fail(node, path + " must be a mapping");
        const std::set<std::string_view> allowed(keys);
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + path);
        }
    }

    template <typename T>
    void read(const YAML::Node& parent, const char* key, const std::string& path, T& value) const {
        const auto node = parent[key];
        if (!node) return;
        if (!node.IsScalar()) fail(node, path + "." + key + " must be a scalar");
        try {
            value = node.as<T>();
        } catch (const YAML::Exception&) {
            fail(node, path + "." + key + ": cannot parse '" + node.Scalar() + "'");
        }
        if constexpr (std::is_floating_point_v<T>) {
            if (!std::isfinite(value) && key != std::string_view("snr_db"))
                fail(node, path + "." + key + " must be finite");
        }
    }

    void read_count(const YAML::Node& parent, const char* key, const std::string& path, std::size_t& value) const {
        const auto node = parent[key];
        if (!node) return;
        long long v = 0;
        read(parent, key, path, v);
        if (v < 0) fail(node, path + "." + key + " must be non-negative");
        value = static_cast<std::size_t>(v);
    }

    template <typename Fn>
    void check(const YAML::Node& node, Fn&& fn) const {
        try {
            fn();
        } catch (const ConfigError& e) {
            fail(node, e.what());
        }
    }

private:
    std::string_view source_;
};

FrequencyBand read_band(const Context& ctx, const YAML::Node& parent, const char* key, const std::string& path,
                        FrequencyBand band) {
    const auto node = parent[key];
    if (!node) return band;
    if (!node.IsSequence() || node.size() != 2) ctx.fail(node, path + "." + key + " must be [low, high]");
    try {
        band.low_hz = node[0].as<double>();
        band.high_hz = node[1].as<double>();
    } catch (const YAML::Exception&) {
        ctx.fail(node, path + "." + key + ": expected two numbers");
    }
    if (!(band.low_hz > 0.0 && band.low_hz < band.high_hz)) ctx.fail(node, path + "." + key + " needs 0 < low < high");
    return band;
}

WaveformSpec read_waveform(const Context& ctx, const YAML::Node& node) {
    WaveformSpec spec;
    if (!node) return spec;
    ctx.expect_map(node, "waveform",
                   {"carrier_frequency_hz", "num_subcarriers", "samples_per_pulse", "pulse_duration_s",
                    "active_subcarriers", "phase_profile"});
    ctx.read(node, "carrier_frequency_hz", "waveform", spec.carrier_frequency_hz);
    ctx.read_count(node, "num_subcarriers", "waveform", spec.num_subcarriers);
    ctx.read_count(node, "samples_per_pulse", "waveform", spec.samples_per_pulse);
    ctx.read(node, "pulse_duration_s", "waveform", spec.pulse_duration_s);
    std::size_t active = spec.num_subcarriers;
    ctx.read_count(node, "active_subcarriers", "waveform", active);
    if (node["phase_profile"]) {
        std::string profile;
        ctx.read(node, "phase_profile", "waveform", profile);
        if (profile == "quadratic")
            spec.phase_profile = PhaseProfile::Quadratic;
        else if (profile == "zero")
            spec.phase_profile = PhaseProfile::Zero;
        else
            ctx.fail(node["phase_profile"], "waveform.phase_profile must be 'quadratic' or 'zero'");
    }
    ctx.check(node, [&] {
        if (active < 1 || active > spec.num_subcarriers)
            throw ConfigError("waveform.active_subcarriers must lie in [1, num_subcarriers]");
        spec.active = centered_band(spec.num_subcarriers, active);
        spec.validate();
    });
    return spec;
}

VitalParams read_vitals(const Context& ctx, const YAML::Node& node, const std::string& path) {
    VitalParams v;
    if (!node) return v;
    ctx.expect_map(node, path,
                   {"breathing_rate_hz", "breathing_amplitude_m", "breathing_harmonic_weights", "heart_rate_hz",
                    "heart_amplitude_m", "projection_angle_deg", "sway_rms_m"});
    ctx.read(node, "breathing_rate_hz", path, v.breathing_rate_hz);
    ctx.read(node, "breathing_amplitude_m", path, v.breathing_amplitude_m);
    if (const auto w = node["breathing_harmonic_weights"]) {
        if (!w.IsSequence() || w.size() != 2) ctx.fail(w, path + ".breathing_harmonic_weights must be [w2, w3]");
        try {
            v.breathing_harmonic_weights = {w[0].as<double>(), w[1].as<double>()};
        } catch (const YAML::Exception&) {
            ctx.fail(w, path + ".breathing_harmonic_weights: expected two numbers");
        }
    }
    ctx.read(node, "heart_rate_hz", path, v.heart_rate_hz);
    ctx.read(node, "heart_amplitude_m", path, v.heart_amplitude_m);
    ctx.read(node, "projection_angle_deg", path, v.projection_angle_deg);
    ctx.read(node, "sway_rms_m", path, v.sway_rms_m);
    ctx.check(node, [&] { v.validate(); });
    if (!(v.sway_rms_m >= 0.0)) ctx.fail(node, path + ".sway_rms_m must be >= 0");
    return v;
}

TargetConfig read_target(const Context& ctx, const YAML::Node& node, const std::string& path) {
    TargetConfig t;
    ctx.expect_map(node, path,
                   {"range_m", "reflectivity", "nlos_attenuation_db", "walking_speed_mps", "vitals", "schedule"});
    ctx.read(node, "range_m", path, t.range_m);
    ctx.read(node, "reflectivity", path, t.reflectivity);
    ctx.read(node, "nlos_attenuation_db", path, t.nlos_attenuation_db);
    ctx.read(node, "walking_speed_mps", path, t.walking_speed_mps);
    t.vitals = read_vitals(ctx, node["vitals"], path + ".vitals");
    if (const auto s = node["schedule"]) {
        if (!s.IsSequence()) ctx.fail(s, path + ".schedule must be a list");
        for (std::size_t i = 0; i < s.size(); ++i) {
            const auto e = s[i];
            const auto epath = path + ".schedule[" + std::to_string(i) + "]";
            ctx.expect_map(e, epath, {"start_s", "end_s", "label"});
            ScheduleEntry entry;
            ctx.read(e, "start_s", epath, entry.start_s);
            ctx.read(e, "end_s", epath, entry.end_s);
            if (e["label"]) {
                std::string label;
                ctx.read(e, "label", epath, label);
                ctx.check(e["label"], [&] { entry.label = segment_label_from_string(label); });
            }
            if (!(entry.end_s > entry.start_s && entry.start_s >= 0.0))
                ctx.fail(e, epath + " needs 0 <= start_s < end_s");
            t.schedule.push_back(entry);
        }
    }
    if (!(t.range_m > 0.0)) ctx.fail(node, path + ".range_m must be positive");
    if (!(t.reflectivity >= 0.0 && t.reflectivity <= 1.0)) ctx.fail(node, path + ".reflectivity must lie in [0, 1]");
    if (!(t.nlos_attenuation_db >= 0.0)) ctx.fail(node, path + ".nlos_attenuation_db must be >= 0");
    if (!(t.walking_speed_mps >= 0.0)) ctx.fail(node, path + ".walking_speed_mps must be >= 0");
    return t;
}

AnalysisConfig read_analysis(const Context& ctx, const YAML::Node& node, std::vector<std::size_t>& sweep) {
    AnalysisConfig a;
    if (!node) return a;
    const std::string path = "analysis";
    ctx.expect_map(node, path,
                   {"cable_offset_m", "hann_window", "clutter_suppression", "average_transfer", "joint_extraction",
                    "subcarrier_count", "max_targets", "min_prominence_db", "sidelobe_guard_db",
                    "breathing_band_hz", "heart_band_hz", "min_duration_s", "zero_padding", "detrend",
                    "min_peak_snr_db", "min_confidence", "noise_floor_min_hz", "harmonic_tolerance_hz",
                    "max_harmonic_order", "alternative_peak_ratio", "sweep_subcarriers"});
    ctx.read(node, "cable_offset_m", path, a.cable_offset_m);
    ctx.read(node, "hann_window", path, a.hann_window);
    ctx.read(node, "clutter_suppression", path, a.clutter_suppression);
    ctx.read(node, "average_transfer", path, a.average_transfer);
    ctx.read(node, "joint_extraction", path, a.joint_extraction);
    if (const auto n = node["subcarrier_count"]; n && !n.IsNull()) {
        std::size_t count = 0;
        ctx.read_count(node, "subcarrier_count", path, count);
        a.subcarrier_count = count;
    }
    ctx.read_count(node, "max_targets", path, a.detection.max_targets);
    ctx.read(node, "min_prominence_db", path, a.detection.min_prominence_db);
    ctx.read(node, "sidelobe_guard_db", path, a.detection.sidelobe_guard_db);
    auto& v = a.vitals;
    v.breathing_band = read_band(ctx, node, "breathing_band_hz", path, v.breathing_band);
    v.heart_band = read_band(ctx, node, "heart_band_hz", path, v.heart_band);
    ctx.read(node, "min_duration_s", path, v.min_duration_s);
    ctx.read_count(node, "zero_padding", path, v.zero_padding);
    ctx.read(node, "detrend", path, v.detrend);
    ctx.read(node, "min_peak_snr_db", path, v.min_peak_snr_db);
    ctx.read(node, "min_confidence", path, v.min_confidence);
    ctx.read(node, "noise_floor_min_hz", path, v.noise_floor_min_hz);
    ctx.read(node, "harmonic_tolerance_hz", path, v.harmonic_tolerance_hz);
    ctx.read_count(node, "max_harmonic_order", path, v.max_harmonic_order);
    ctx.read(node, "alternative_peak_ratio", path, v.alternative_peak_ratio);
    if (const auto s = node["sweep_subcarriers"]) {
        if (!s.IsSequence() || s.size() == 0) ctx.fail(s, "analysis.sweep_subcarriers must be a non-empty list");
        sweep.clear();
        for (const auto& c : s) {
            long long n = 0;
            try {
                n = c.as<long long>();
            } catch (const YAML::Exception&) {
                ctx.fail(c, "analysis.sweep_subcarriers: expected integers");
            }
            if (n < 1) ctx.fail(c, "analysis.sweep_subcarriers entries must be >= 1");
            sweep.push_back(static_cast<std::size_t>(n));
        }
    }
    if (a.detection.max_targets < 1) ctx.fail(node, "analysis.max_targets must be >= 1");
    if (!(a.cable_offset_m >= 0.0)) ctx.fail(node, "analysis.cable_offset_m must be >= 0");
    if (v.zero_padding < 1) ctx.fail(node, "analysis.zero_padding must be >= 1");
    if (v.max_harmonic_order < 2) ctx.fail(node, "analysis.max_harmonic_order must be >= 2");
    if (!(v.min_confidence >= 0.0 && v.min_confidence <= 1.0)) ctx.fail(node, "analysis.min_confidence must lie in [0, 1]");
    return a;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (!(duration_s > 0.0)) throw ConfigError("duration_s must be positive");
    if (!(frame_rate_hz > 0.0)) throw ConfigError("frame_rate_hz must be positive");
    if (averaging_factor < 1) throw ConfigError("averaging_factor must be >= 1");
    if (std::isnan(snr_db)) throw ConfigError("snr_db must be a number or .inf");
    if (!(cable_delay_m >= 0.0)) throw ConfigError("cable_delay_m must be >= 0");
    waveform.validate();
    const double max_range = max_unambiguous_range(waveform);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto& t = targets[i];
        t.vitals.validate();
        const double far = t.range_m + t.walking_speed_mps * duration_s / 2.0;
        if (!(t.range_m > 0.0) || far + cable_delay_m >= max_range)
            throw ConfigError("targets[" + std::to_string(i) + "] range outside (0, " + std::to_string(max_range) + ") m");
        for (const auto& e : t.schedule)
            if (e.end_s > duration_s + 1e-9)
                throw ConfigError("targets[" + std::to_string(i) + "].schedule extends past duration_s");
    }
    for (std::size_t i = 0; i < clutter.size(); ++i)
        if (!(clutter[i].range_m > 0.0 && clutter[i].range_m + cable_delay_m < max_range) || !(clutter[i].amplitude >= 0.0))
            throw ConfigError("clutter[" + std::to_string(i) + "] needs a range inside the pulse and amplitude >= 0");
    for (const auto c : sweep_subcarriers)
        if (c < 1 || c > waveform.active.count)
            throw ConfigError("sweep count " + std::to_string(c) + " outside [1, active_subcarriers]");
    if (analysis.subcarrier_count &&
        (*analysis.subcarrier_count < 1 || *analysis.subcarrier_count > waveform.active.count))
        throw ConfigError("analysis.subcarrier_count outside [1, active_subcarriers]");
    if (!(tolerances.br_bpm >= 0.0 && tolerances.hr_bpm >= 0.0)) throw ConfigError("report tolerances must be >= 0");
}

ScenarioConfig parse_scenario_config(std::string_view text, std::string_view source) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError(where(source, e.mark) + e.msg);
    }
    const Context ctx(source);
    ScenarioConfig c;
    if (root.IsNull()) return c;
    ctx.expect_map(root, "config",
                   {"name", "description", "seed", "duration_s", "frame_rate_hz", "snr_db", "averaging_factor",
                    "cable_delay_m", "waveform", "targets", "clutter", "analysis", "report"});
    ctx.read(root, "name", "config", c.name);
    ctx.read(root, "description", "config", c.description);
    if (const auto s = root["seed"]) {
        if (!s.IsScalar() || s.Scalar().starts_with("-")) ctx.fail(s, "config.seed must be a non-negative integer");
        ctx.read(root, "seed", "config", c.seed);
    }
    ctx.read(root, "duration_s", "config", c.duration_s);
    ctx.read(root, "frame_rate_hz", "config", c.frame_rate_hz);
    ctx.read(root, "snr_db", "config", c.snr_db);
    ctx.read_count(root, "averaging_factor", "config", c.averaging_factor);
    ctx.read(root, "cable_delay_m", "config", c.cable_delay_m);
    c.waveform = read_waveform(ctx, root["waveform"]);
    c.sweep_subcarriers = {10, 40, c.waveform.active.count};
    if (const auto t = root["targets"]) {
        if (!t.IsSequence()) ctx.fail(t, "targets must be a list");
        for (std::size_t i = 0; i < t.size(); ++i)
            c.targets.push_back(read_target(ctx, t[i], "targets[" + std::to_string(i) + "]"));
    }
    if (const auto cl = root["clutter"]) {
        if (!cl.IsSequence()) ctx.fail(cl, "clutter must be a list");
        for (std::size_t i = 0; i < cl.size(); ++i) {
            const auto path = "clutter[" + std::to_string(i) + "]";
            ctx.expect_map(cl[i], path, {"range_m", "amplitude"});
            ClutterReflector r;
            ctx.read(cl[i], "range_m", path, r.range_m);
            ctx.read(cl[i], "amplitude", path, r.amplitude);
            c.clutter.push_back(r);
        }
    }
    c.analysis = read_analysis(ctx, root["analysis"], c.sweep_subcarriers);
    if (const auto r = root["report"]) {
        ctx.expect_map(r, "report", {"br_tolerance_bpm", "hr_tolerance_bpm"});
        ctx.read(r, "br_tolerance_bpm", "report", c.tolerances.br_bpm);
        ctx.read(r, "hr_tolerance_bpm", "report", c.tolerances.hr_bpm);
    }
    ctx.check(root, [&] { c.validate(); });
    return c;
}

ScenarioConfig load_scenario_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_config(ss.str(), path.string());
}

std::string to_yaml(const ScenarioConfig& c) {
    YAML::Emitter out;
    out.SetDoublePrecision(std::numeric_limits<double>::max_digits10);
    auto band = [&](const FrequencyBand& b) {
        out << YAML::Flow << YAML::BeginSeq << b.low_hz << b.high_hz << YAML::EndSeq;
    };

    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << c.name;
    out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << c.description;
    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::Key << "duration_s" << YAML::Value << c.duration_s;
    out << YAML::Key << "frame_rate_hz" << YAML::Value << c.frame_rate_hz;
    out << YAML::Key << "snr_db" << YAML::Value << c.snr_db;
    out << YAML::Key << "averaging_factor" << YAML::Value << c.averaging_factor;
    out << YAML::Key << "cable_delay_m" << YAML::Value << c.cable_delay_m;

    const auto& w = c.waveform;
    out << YAML::Key << "waveform" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "carrier_frequency_hz" << YAML::Value << w.carrier_frequency_hz;
    out << YAML::Key << "num_subcarriers" << YAML::Value << w.num_subcarriers;
    out << YAML::Key << "samples_per_pulse" << YAML::Value << w.samples_per_pulse;
    out << YAML::Key << "pulse_duration_s" << YAML::Value << w.pulse_duration_s;
    out << YAML::Key << "active_subcarriers" << YAML::Value << w.active.count;
    out << YAML::Key << "phase_profile" << YAML::Value
        << (w.phase_profile == PhaseProfile::Quadratic ? "quadratic" : "zero");
    out << YAML::EndMap;

    out << YAML::Key << "targets" << YAML::Value << YAML::BeginSeq;
    for (const auto& t : c.targets) {
        out << YAML::BeginMap;
        out << YAML::Key << "range_m" << YAML::Value << t.range_m;
        out << YAML::Key << "reflectivity" << YAML::Value << t.reflectivity;
        out << YAML::Key << "nlos_attenuation_db" << YAML::Value << t.nlos_attenuation_db;
        out << YAML::Key << "walking_speed_mps" << YAML::Value << t.walking_speed_mps;
        const auto& v = t.vitals;
        out << YAML::Key << "vitals" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "breathing_rate_hz" << YAML::Value << v.breathing_rate_hz;
        out << YAML::Key << "breathing_amplitude_m" << YAML::Value << v.breathing_amplitude_m;
        out << YAML::Key << "breathing_harmonic_weights" << YAML::Value << YAML::Flow << YAML::BeginSeq
            << v.breathing_harmonic_weights[0] << v.breathing_harmonic_weights[1] << YAML::EndSeq;
        out << YAML::Key << "heart_rate_hz" << YAML::Value << v.heart_rate_hz;
        out << YAML::Key << "heart_amplitude_m" << YAML::Value << v.heart_amplitude_m;
        out << YAML::Key << "projection_angle_deg" << YAML::Value << v.projection_angle_deg;
        out << YAML::Key << "sway_rms_m" << YAML::Value << v.sway_rms_m;
        out << YAML::EndMap;
        out << YAML::Key << "schedule" << YAML::Value << YAML::BeginSeq;
        for (const auto& e : t.schedule) {
            out << YAML::Flow << YAML::BeginMap;
            out << YAML::Key << "start_s" << YAML::Value << e.start_s;
            out << YAML::Key << "end_s" << YAML::Value << e.end_s;
            out << YAML::Key << "label" << YAML::Value << std::string(to_string(e.label));
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    out << YAML::Key << "clutter" << YAML::Value << YAML::BeginSeq;
    for (const auto& r : c.clutter) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "range_m" << YAML::Value << r.range_m;
        out << YAML::Key << "amplitude" << YAML::Value << r.amplitude;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    const auto& a = c.analysis;
    out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "cable_offset_m" << YAML::Value << a.cable_offset_m;
    out << YAML::Key << "hann_window" << YAML::Value << a.hann_window;
    out << YAML::Key << "clutter_suppression" << YAML::Value << a.clutter_suppression;
    out << YAML::Key << "average_transfer" << YAML::Value << a.average_transfer;
    out << YAML::Key << "joint_extraction" << YAML::Value << a.joint_extraction;
    out << YAML::Key << "subcarrier_count" << YAML::Value;
    if (a.subcarrier_count)
        out << *a.subcarrier_count;
    else
        out << YAML::Null;
    out << YAML::Key << "max_targets" << YAML::Value << a.detection.max_targets;
    out << YAML::Key << "min_prominence_db" << YAML::Value << a.detection.min_prominence_db;
    out << YAML::Key << "sidelobe_guard_db" << YAML::Value << a.detection.sidelobe_guard_db;
    out << YAML::Key << "breathing_band_hz" << YAML::Value;
    band(a.vitals.breathing_band);
    out << YAML::Key << "heart_band_hz" << YAML::Value;
    band(a.vitals.heart_band);
    out << YAML::Key << "min_duration_s" << YAML::Value << a.vitals.min_duration_s;
    out << YAML::Key << "zero_padding" << YAML::Value << a.vitals.zero_padding;
    out << YAML::Key << "detrend" << YAML::Value << a.vitals.detrend;
    out << YAML::Key << "min_peak_snr_db" << YAML::Value << a.vitals.min_peak_snr_db;
    out << YAML::Key << "min_confidence" << YAML::Value << a.vitals.min_confidence;
    out << YAML::Key << "noise_floor_min_hz" << YAML::Value << a.vitals.noise_floor_min_hz;
    out << YAML::Key << "harmonic_tolerance_hz" << YAML::Value << a.vitals.harmonic_tolerance_hz;
    out << YAML::Key << "max_harmonic_order" << YAML::Value << a.vitals.max_harmonic_order;
    out << YAML::Key << "alternative_peak_ratio" << YAML::Value << a.vitals.alternative_peak_ratio;
    out << YAML::Key << "sweep_subcarriers" << YAML::Value << YAML::Flow << c.sweep_subcarriers;
    out << YAML::EndMap;

    out << YAML::Key << "report" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "br_tolerance_bpm" << YAML::Value << c.tolerances.br_bpm;
    out << YAML::Key << "hr_tolerance_bpm" << YAML::Value << c.tolerances.hr_bpm;
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace jcv
