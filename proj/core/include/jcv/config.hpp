#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jcv/channel.hpp"
#include "jcv/physio.hpp"
#include "jcv/pipeline.hpp"
#include "jcv/waveform.hpp"

namespace jcv {

struct TargetConfig {
    double range_m = 2.0;
    double reflectivity = 0.67;
    double nlos_attenuation_db = 0.0;
    /// Back-and-forth walking speed; 0 keeps the person seated/standing.
    double walking_speed_mps = 0.0;
    VitalParams vitals;
    std::vector<ScheduleEntry> schedule;

    bool operator==(const TargetConfig&) const = default;
};

struct ReportTolerances {
    double br_bpm = 1.0;
    double hr_bpm = 2.0;

    bool operator==(const ReportTolerances&) const = default;
};

/// One simulated experiment plus the analysis settings used to process it.
struct ScenarioConfig {
    std::string name = "custom";
    std::string description;
    std::uint64_t seed = 1;
    double duration_s = 40.0;
    /// Slow-time rate after averaging; raw pulses arrive averaging_factor times faster.
    double frame_rate_hz = 50.0;
    double snr_db = 20.0;
    std::size_t averaging_factor = 1;
    double cable_delay_m = 0.0;
    WaveformSpec waveform;
    std::vector<TargetConfig> targets;
    std::vector<ClutterReflector> clutter;
    AnalysisConfig analysis;
    std::vector<std::size_t> sweep_subcarriers{10, 40, 1024};
    ReportTolerances tolerances;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parse YAML text. Unknown keys, wrong types and invalid values are
/// rejected with a "source:line:column:" prefix.
ScenarioConfig parse_scenario_config(std::string_view text, std::string_view source = "<config>");
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

/// Canonical YAML with every field written out, defaults included.
/// parse_scenario_config(to_yaml(c)) == c.
std::string to_yaml(const ScenarioConfig& config);

}  // namespace jcv
