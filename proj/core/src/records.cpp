#include "jcv/records.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "jcv/capture_file.hpp"
#include "jcv/fft.hpp"
#include "jcv/vitals.hpp"

#ifndef JCV_VERSION
#define JCV_VERSION "0.0.0"
#endif

namespace jcv {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <typename T>
ordered_json opt(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

ordered_json to_ordered(const EstimateRecord& r) {
    ordered_json j;
    j["type"] = "estimate";
    j["scenario"] = r.scenario;
    j["target_id"] = r.target_id;
    j["range_m"] = r.range_m;
    j["prominence_db"] = r.prominence_db;
    j["br_bpm"] = opt(r.br_bpm);
    j["hr_bpm"] = opt(r.hr_bpm);
    j["br_peak_hz"] = r.br_peak_hz;
    j["hr_peak_hz"] = r.hr_peak_hz;
    j["br_confidence"] = r.br_confidence;
    j["hr_confidence"] = r.hr_confidence;
    j["confidence"] = r.confidence;
    j["harmonic_flag"] = r.harmonic_flag;
    j["harmonic_order"] = opt(r.harmonic_order);
    j["hr_alternative_hz"] = opt(r.hr_alternative_hz);
    return j;
}

ordered_json to_ordered(const TruthRecord& r) {
    ordered_json j;
    j["type"] = "truth";
    j["scenario"] = r.scenario;
    j["target_id"] = r.target_id;
    j["range_m"] = r.range_m;
    j["br_bpm"] = opt(r.br_bpm);
    j["hr_bpm"] = opt(r.hr_bpm);
    return j;
}

EstimateRecord estimate_from(const json& j) {
    EstimateRecord r;
    r.scenario = j.at("scenario").get<std::string>();
    r.target_id = j.at("target_id").get<std::size_t>();
    r.range_m = j.at("range_m").get<double>();
    r.prominence_db = j.value("prominence_db", 0.0);
    r.br_bpm = get_opt<double>(j, "br_bpm");
    r.hr_bpm = get_opt<double>(j, "hr_bpm");
    r.br_peak_hz = j.value("br_peak_hz", 0.0);
    r.hr_peak_hz = j.value("hr_peak_hz", 0.0);
    r.br_confidence = j.value("br_confidence", 0.0);
    r.hr_confidence = j.value("hr_confidence", 0.0);
    r.confidence = j.value("confidence", 0.0);
    r.harmonic_flag = j.value("harmonic_flag", false);
    r.harmonic_order = get_opt<std::size_t>(j, "harmonic_order");
    r.hr_alternative_hz = get_opt<double>(j, "hr_alternative_hz");
    return r;
}

TruthRecord truth_from(const json& j) {
    TruthRecord r;
    r.scenario = j.at("scenario").get<std::string>();
    r.target_id = j.at("target_id").get<std::size_t>();
    r.range_m = j.value("range_m", 0.0);
    r.br_bpm = get_opt<double>(j, "br_bpm");
    r.hr_bpm = get_opt<double>(j, "hr_bpm");
    return r;
}

template <typename Record, typename Fn>
std::vector<Record> read_lines(std::istream& in, std::string_view source, const char* type, Fn&& convert) {
    std::vector<Record> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = json::parse(line);
            if (j.contains("type") && j.at("type") != type)
                throw DataError("expected a '" + std::string(type) + "' record, found '" +
                                j.at("type").get<std::string>() + "'");
            out.push_back(convert(j));
        } catch (const json::exception& e) {
            throw DataError(std::string(source) + ":" + std::to_string(lineno) + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError(std::string(source) + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

const char* library_version() { return JCV_VERSION; }

std::vector<EstimateRecord> make_estimate_records(std::string_view scenario, const PipelineResult& result) {
    std::vector<EstimateRecord> out;
    for (const auto& t : result.targets) {
        EstimateRecord r;
        r.scenario = std::string(scenario);
        r.target_id = t.target_id;
        r.range_m = t.detection.range_m;
        r.prominence_db = t.detection.prominence_db;
        const auto& v = t.vitals;
        r.br_bpm = v.br_bpm;
        r.hr_bpm = v.hr_bpm;
        r.br_peak_hz = v.br_peak_hz;
        r.hr_peak_hz = v.hr_peak_hz;
        r.br_confidence = v.br_confidence;
        r.hr_confidence = v.hr_confidence;
        r.confidence = v.confidence();
        r.harmonic_flag = v.harmonic_flag;
        r.harmonic_order = v.harmonic_order;
        r.hr_alternative_hz = v.hr_alternative_hz;
        out.push_back(std::move(r));
    }
    return out;
}

std::string to_json_line(const EstimateRecord& r) { return to_ordered(r).dump(); }
std::string to_json_line(const TruthRecord& r) { return to_ordered(r).dump(); }

void write_records(std::ostream& out, const std::vector<EstimateRecord>& records) {
    for (const auto& r : records) out << to_json_line(r) << '\n';
}

void write_records(std::ostream& out, const std::vector<TruthRecord>& records) {
    for (const auto& r : records) out << to_json_line(r) << '\n';
}

std::vector<EstimateRecord> read_estimate_records(std::istream& in, std::string_view source) {
    return read_lines<EstimateRecord>(in, source, "estimate", estimate_from);
}

std::vector<TruthRecord> read_truth_records(std::istream& in, std::string_view source) {
    return read_lines<TruthRecord>(in, source, "truth", truth_from);
}

std::vector<EstimateRecord> read_estimate_records(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_estimate_records(in, path.string());
}

std::vector<TruthRecord> read_truth_records(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_truth_records(in, path.string());
}

void write_range_profile_csv(std::ostream& out, const RangeProfileSeries& profiles) {
    const auto power = profiles.mean_power_db();
    out << "range_m,mean_power_db\n";
    for (std::size_t n = 0; n < power.size(); ++n) out << num(profiles.range_axis[n]) << ',' << num(power[n]) << '\n';
}

void write_phase_tracks_csv(std::ostream& out, const PipelineResult& result, double wavelength_m) {
    out << "target_id,time_s,phase_rad,displacement_m\n";
    for (const auto& t : result.targets) {
        const auto d = phase_to_displacement(t.track, wavelength_m);
        for (std::size_t i = 0; i < d.size(); ++i)
            out << t.target_id << ',' << num(static_cast<double>(i) / t.track.sample_rate_hz) << ','
                << num(t.track.unwrapped_phase[i]) << ',' << num(d[i]) << '\n';
    }
}

void write_spectra_csv(std::ostream& out, const PipelineResult& result) {
    out << "target_id,band,frequency_hz,magnitude\n";
    for (const auto& t : result.targets) {
        for (const auto& [band, s] : {std::pair{"breathing", &t.vitals.br_spectrum}, std::pair{"heart", &t.vitals.hr_spectrum}})
            for (std::size_t k = 0; k < s->frequency_hz.size(); ++k)
                out << t.target_id << ',' << band << ',' << num(s->frequency_hz[k]) << ',' << num(s->magnitude[k]) << '\n';
    }
}

void write_displacement_csv(std::ostream& out, const std::vector<DisplacementTrace>& traces) {
    out << "target_id,time_s,displacement_m,label\n";
    for (std::size_t id = 0; id < traces.size(); ++id) {
        const auto& tr = traces[id];
        for (std::size_t i = 0; i < tr.samples.size(); ++i)
            out << id << ',' << num(static_cast<double>(i) / tr.sample_rate_hz) << ',' << num(tr.samples[i]) << ','
                << to_string(tr.label_at(i)) << '\n';
    }
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_json(const Manifest& m) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(m.config_yaml)));
    ordered_json j;
    j["command"] = m.command;
    j["scenario"] = m.scenario;
    j["seed"] = m.seed;
    j["config_hash"] = std::string("fnv1a64:") + hash;
    j["versions"] = {{"jcv", library_version()},
                     {"fftw", fft::backend_version()},
                     {"compiler", __VERSION__},
                     {"capture_format", kCaptureVersion}};
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["config"] = m.config_yaml;
    return j.dump(2);
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out << to_json(manifest) << '\n';
}

}  // namespace jcv
