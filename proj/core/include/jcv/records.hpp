#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jcv/pipeline.hpp"

namespace jcv {

/// One line of estimator output.
struct EstimateRecord {
    std::string scenario;
    std::size_t target_id = 0;
    double range_m = 0.0;
    double prominence_db = 0.0;
    std::optional<double> br_bpm;
    std::optional<double> hr_bpm;
    double br_peak_hz = 0.0;
    double hr_peak_hz = 0.0;
    double br_confidence = 0.0;
    double hr_confidence = 0.0;
    double confidence = 0.0;
    bool harmonic_flag = false;
    std::optional<std::size_t> harmonic_order;
    std::optional<double> hr_alternative_hz;

    bool operator==(const EstimateRecord&) const = default;
};

/// Simulated ground truth for one person.
struct TruthRecord {
    std::string scenario;
    std::size_t target_id = 0;
    double range_m = 0.0;
    std::optional<double> br_bpm;
    std::optional<double> hr_bpm;

    bool operator==(const TruthRecord&) const = default;
};

std::vector<EstimateRecord> make_estimate_records(std::string_view scenario, const PipelineResult& result);

std::string to_json_line(const EstimateRecord& r);
std::string to_json_line(const TruthRecord& r);

void write_records(std::ostream& out, const std::vector<EstimateRecord>& records);
void write_records(std::ostream& out, const std::vector<TruthRecord>& records);

/// JSON-lines readers; malformed lines raise DataError with the line number.
std::vector<EstimateRecord> read_estimate_records(std::istream& in, std::string_view source = "<estimates>");
std::vector<TruthRecord> read_truth_records(std::istream& in, std::string_view source = "<truth>");
std::vector<EstimateRecord> read_estimate_records(const std::filesystem::path& path);
std::vector<TruthRecord> read_truth_records(const std::filesystem::path& path);

// Comma-separated plot data.
void write_range_profile_csv(std::ostream& out, const RangeProfileSeries& profiles);
void write_phase_tracks_csv(std::ostream& out, const PipelineResult& result, double wavelength_m);
void write_spectra_csv(std::ostream& out, const PipelineResult& result);
void write_displacement_csv(std::ostream& out, const std::vector<DisplacementTrace>& traces);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

struct Manifest {
    std::string command;
    std::string scenario;
    std::uint64_t seed = 0;
    std::string config_yaml;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

/// JSON manifest: command, config hash and text, seed, library versions.
std::string to_json(const Manifest& manifest);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

/// Version string of this library.
const char* library_version();

}  // namespace jcv
