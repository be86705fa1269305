#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jcv/channel.hpp"
#include "jcv/config.hpp"
#include "jcv/records.hpp"

namespace jcv {

struct SimulationResult {
    SlowFastMatrix capture;               ///< raw frames at frame_rate * averaging_factor
    std::vector<DisplacementTrace> traces; ///< one per target, ordered by rest range
    std::vector<TruthRecord> truth;
};

struct ScenarioInfo {
    std::string name;
    std::string description;
};

/// Built-in scenarios covering the measured conditions: distances, clothing,
/// breath holds, desk work, rotation angles, standing, lying, walking, NLOS
/// and two or three people. Reference rates come from the measured
/// reference-device values.
std::vector<ScenarioInfo> builtin_scenarios();
ScenarioConfig builtin_scenario(std::string_view name);

/// Per-pulse SNR used by the single-person library scenarios: 20 dB at 2 m,
/// falling with the fourth power of range.
double library_snr_db(double range_m);

Scene build_scene(const ScenarioConfig& config, std::vector<DisplacementTrace>* traces = nullptr);

/// Truth records ordered by rest range, ids 0..n-1.
std::vector<TruthRecord> ground_truth(const ScenarioConfig& config);

SimulationResult simulate_scenario(const ScenarioConfig& config);

/// Analysis settings for a capture: the config's analysis section with the
/// capture's averaging factor applied.
AnalysisConfig analysis_for_capture(const ScenarioConfig& config, std::size_t averaging_factor);

}  // namespace jcv
