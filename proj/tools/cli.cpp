#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "jcv/capture_file.hpp"
#include "jcv/config.hpp"
#include "jcv/pipeline.hpp"
#include "jcv/records.hpp"
#include "jcv/report.hpp"
#include "jcv/scenarios.hpp"

namespace jcv::cli {
namespace {

namespace fs = std::filesystem;

struct ScenarioSource {
    std::string config_path;
    std::string scenario;
    std::optional<std::uint64_t> seed;

    void add_to(CLI::App* app, bool required) {
        auto* group = app->add_option_group("scenario source");
        group->add_option("-c,--config", config_path, "scenario YAML file");
        group->add_option("-s,--scenario", scenario, "built-in scenario name");
        if (required)
            group->require_option(1);
        else
            group->require_option(0, 1);
        app->add_option("--seed", seed, "override the scenario seed");
    }

    bool given() const { return !config_path.empty() || !scenario.empty(); }

    ScenarioConfig load() const {
        ScenarioConfig c = !config_path.empty() ? load_scenario_config(config_path)
                           : !scenario.empty()  ? builtin_scenario(scenario)
                                                : ScenarioConfig{};
        if (seed) c.seed = *seed;
        c.validate();
        return c;
    }
};

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    return out;
}

std::string with_suffix(const fs::path& p, const std::string& suffix) { return p.string() + suffix; }

std::string join(const std::vector<std::string>& args) {
    std::string s;
    for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
    return s;
}

// ---- simulate ----

struct SimulateOptions {
    ScenarioSource source;
    std::string output;
    std::string truth;
    std::string traces;
};

void simulate(const SimulateOptions& o, const std::string& command, std::ostream& out) {
    const auto config = o.source.load();
    const auto sim = simulate_scenario(config);
    const fs::path capture_path = o.output;
    if (capture_path.has_parent_path()) fs::create_directories(capture_path.parent_path());
    write_capture_file(capture_path, sim.capture, static_cast<std::uint32_t>(config.averaging_factor), config.seed);

    const std::string truth_path = o.truth.empty() ? with_suffix(capture_path, ".truth.jsonl") : o.truth;
    {
        auto f = open_out(truth_path);
        write_records(f, sim.truth);
    }
    Manifest m{command, config.name, config.seed, to_yaml(config), {}, {capture_path.string(), truth_path}};
    if (!o.traces.empty()) {
        auto f = open_out(o.traces);
        write_displacement_csv(f, sim.traces);
        m.outputs.push_back(o.traces);
    }
    write_manifest(with_suffix(capture_path, ".manifest.json"), m);
    write_records(out, sim.truth);
}

// ---- process ----

struct ProcessOptions {
    ScenarioSource source;
    std::string capture;
    std::string name;
    std::string output;
    std::string out_dir;
    bool export_profiles = false;
    bool export_phase = false;
    bool export_spectra = false;
    std::optional<std::size_t> subcarriers;
    std::optional<std::size_t> averaging;
};

void process(const ProcessOptions& o, const std::string& command, std::ostream& out) {
    const auto file = read_capture_file(o.capture);
    const auto config = o.source.load();
    auto analysis = analysis_for_capture(config, o.averaging.value_or(file.header.averaging_factor));
    if (o.subcarriers) analysis.subcarrier_count = *o.subcarriers;
    const std::string scenario = !o.name.empty()          ? o.name
                                 : o.source.given()       ? config.name
                                                          : fs::path(o.capture).stem().string();

    const auto result = process_capture(file.capture, analysis);
    const auto records = make_estimate_records(scenario, result);

    Manifest m{command, scenario, file.header.seed, to_yaml(config), {o.capture}, {}};
    if (!o.output.empty()) {
        auto f = open_out(o.output);
        write_records(f, records);
        m.outputs.push_back(o.output);
    }
    write_records(out, records);

    const bool exports = o.export_profiles || o.export_phase || o.export_spectra;
    if (exports && o.out_dir.empty()) throw ConfigError("export flags need --out-dir");
    const fs::path dir = o.out_dir;
    if (o.export_profiles) {
        auto f = open_out(dir / "range_profile.csv");
        write_range_profile_csv(f, result.profiles);
        m.outputs.push_back((dir / "range_profile.csv").string());
    }
    if (o.export_phase) {
        auto f = open_out(dir / "phase_tracks.csv");
        write_phase_tracks_csv(f, result, file.capture.spec.wavelength_m());
        m.outputs.push_back((dir / "phase_tracks.csv").string());
    }
    if (o.export_spectra) {
        auto f = open_out(dir / "spectra.csv");
        write_spectra_csv(f, result);
        m.outputs.push_back((dir / "spectra.csv").string());
    }
    const fs::path manifest = !o.out_dir.empty() ? dir / "manifest.json"
                              : !o.output.empty() ? fs::path(with_suffix(o.output, ".manifest.json"))
                                                  : fs::path(with_suffix(o.capture, ".process.manifest.json"));
    if (manifest.has_parent_path()) fs::create_directories(manifest.parent_path());
    write_manifest(manifest, m);
}

// ---- sweep ----

struct SweepOptions {
    ScenarioSource source;
    std::vector<std::size_t> counts;
    std::string out_dir = "sweep";
};

void sweep(const SweepOptions& o, const std::string& command, std::ostream& out) {
    auto config = o.source.load();
    const auto counts = o.counts.empty() ? config.sweep_subcarriers : o.counts;
    for (const auto c : counts)
        if (c < 1 || c > config.waveform.active.count)
            throw ConfigError("sweep count " + std::to_string(c) + " outside [1, " +
                              std::to_string(config.waveform.active.count) + "]");

    const auto sim = simulate_scenario(config);
    const fs::path dir = o.out_dir;
    fs::create_directories(dir);
    Manifest m{command, config.name, config.seed, to_yaml(config), {}, {}};
    {
        auto f = open_out(dir / "truth.jsonl");
        write_records(f, sim.truth);
        m.outputs.push_back((dir / "truth.jsonl").string());
    }

    std::vector<PipelineResult> runs;
    for (const auto count : counts) {
        auto analysis = analysis_for_capture(config, config.averaging_factor);
        analysis.subcarrier_count = count;
        runs.push_back(process_capture(sim.capture, analysis));
        const auto tag = std::to_string(count);
        auto records = make_estimate_records(config.name, runs.back());
        auto f = open_out(dir / ("estimates_" + tag + ".jsonl"));
        write_records(f, records);
        auto p = open_out(dir / ("range_profile_" + tag + ".csv"));
        write_range_profile_csv(p, runs.back().profiles);
        m.outputs.push_back((dir / ("estimates_" + tag + ".jsonl")).string());
        m.outputs.push_back((dir / ("range_profile_" + tag + ".csv")).string());
    }

    // Cross-count spectral correlation of the strongest detection against the
    // widest band.
    std::size_t ref = 0;
    for (std::size_t i = 1; i < counts.size(); ++i)
        if (counts[i] > counts[ref]) ref = i;
    auto strongest = [](const PipelineResult& r) -> const TargetResult* {
        const TargetResult* best = nullptr;
        for (const auto& t : r.targets)
            if (!best || t.detection.mean_power_db > best->detection.mean_power_db) best = &t;
        return best;
    };

    std::ostringstream table;
    char line[200];
    std::snprintf(line, sizeof line, "%11s %10s %8s %8s %8s %8s %8s\n", "subcarriers", "resolution", "targets",
                  "BR bpm", "HR bpm", "BR corr", "HR corr");
    table << line;
    auto fmt = [](const std::optional<double>& v) {
        char b[16];
        if (!v) return std::string("--");
        std::snprintf(b, sizeof b, "%.2f", *v);
        return std::string(b);
    };
    auto f = open_out(dir / "sweep.csv");
    f << "subcarriers,range_resolution_m,targets,br_bpm,hr_bpm,br_peak_hz,hr_peak_hz,br_correlation,hr_correlation\n";
    const auto* ref_target = strongest(runs[ref]);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto* t = strongest(runs[i]);
        std::optional<double> br_corr;
        std::optional<double> hr_corr;
        if (t && ref_target) {
            br_corr = spectral_correlation(t->vitals.br_spectrum, ref_target->vitals.br_spectrum);
            hr_corr = spectral_correlation(t->vitals.hr_spectrum, ref_target->vitals.hr_spectrum);
        }
        const auto br = t ? t->vitals.br_bpm : std::nullopt;
        const auto hr = t ? t->vitals.hr_bpm : std::nullopt;
        std::snprintf(line, sizeof line, "%11zu %9.3fm %8zu %8s %8s %8s %8s\n", counts[i],
                      runs[i].profiles.range_resolution_m, runs[i].targets.size(), fmt(br).c_str(), fmt(hr).c_str(),
                      fmt(br_corr).c_str(), fmt(hr_corr).c_str());
        table << line;
        auto v = [](const std::optional<double>& x) { return x ? std::to_string(*x) : std::string(); };
        f << counts[i] << ',' << runs[i].profiles.range_resolution_m << ',' << runs[i].targets.size() << ',' << v(br)
          << ',' << v(hr) << ',' << (t ? t->vitals.br_peak_hz : 0.0) << ',' << (t ? t->vitals.hr_peak_hz : 0.0) << ','
          << v(br_corr) << ',' << v(hr_corr) << '\n';
    }
    m.outputs.push_back((dir / "sweep.csv").string());
    write_manifest(dir / "manifest.json", m);
    out << table.str();
}

// ---- report ----

struct ReportOptions {
    std::vector<std::string> estimates;
    std::vector<std::string> truths;
    std::optional<double> br_tol;
    std::optional<double> hr_tol;
    std::string csv;
};

void report(const ReportOptions& o, const std::string& command, std::ostream& out) {
    std::vector<EstimateRecord> estimates;
    std::vector<TruthRecord> truths;
    for (const auto& p : o.estimates) {
        auto r = read_estimate_records(fs::path(p));
        estimates.insert(estimates.end(), r.begin(), r.end());
    }
    for (const auto& p : o.truths) {
        auto r = read_truth_records(fs::path(p));
        truths.insert(truths.end(), r.begin(), r.end());
    }
    ReportTolerances tol;
    if (o.br_tol) tol.br_bpm = *o.br_tol;
    if (o.hr_tol) tol.hr_bpm = *o.hr_tol;
    if (!(tol.br_bpm >= 0.0 && tol.hr_bpm >= 0.0)) throw ConfigError("tolerances must be >= 0");
    const auto rep = build_report(estimates, truths, tol);
    out << format_table(rep);
    if (!o.csv.empty()) {
        auto f = open_out(o.csv);
        f << format_csv(rep);
        Manifest m{command, "", 0, "", {}, {o.csv}};
        m.inputs = o.estimates;
        m.inputs.insert(m.inputs.end(), o.truths.begin(), o.truths.end());
        write_manifest(with_suffix(o.csv, ".manifest.json"), m);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"jcv: OFDM radar vital-sign simulator and processor"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(library_version()));

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "simulate a scenario into a capture file");
    sim.source.add_to(sim_cmd, true);
    sim_cmd->add_option("-o,--output", sim.output, "capture file to write")->required();
    sim_cmd->add_option("--truth", sim.truth, "ground-truth records (default <output>.truth.jsonl)");
    sim_cmd->add_option("--export-traces", sim.traces, "displacement traces as CSV");

    ProcessOptions proc;
    auto* proc_cmd = app.add_subcommand("process", "estimate vital signs from a capture file");
    proc_cmd->add_option("capture", proc.capture, "capture file")->required();
    proc.source.add_to(proc_cmd, false);
    proc_cmd->add_option("--name", proc.name, "scenario id written into the records");
    proc_cmd->add_option("-o,--output", proc.output, "estimate records (JSON lines)");
    proc_cmd->add_option("--out-dir", proc.out_dir, "directory for CSV exports and the manifest");
    proc_cmd->add_flag("--export-profiles", proc.export_profiles, "write range_profile.csv");
    proc_cmd->add_flag("--export-phase", proc.export_phase, "write phase_tracks.csv");
    proc_cmd->add_flag("--export-spectra", proc.export_spectra, "write spectra.csv");
    proc_cmd->add_option("--subcarriers", proc.subcarriers, "process only this many centered subcarriers");
    proc_cmd->add_option("--averaging", proc.averaging, "override the capture's averaging factor");

    SweepOptions sw;
    auto* sw_cmd = app.add_subcommand("sweep", "compare processing across subcarrier counts");
    sw.source.add_to(sw_cmd, true);
    sw_cmd->add_option("--counts", sw.counts, "subcarrier counts")->delimiter(',');
    sw_cmd->add_option("--out-dir", sw.out_dir, "output directory");

    ReportOptions rep;
    auto* rep_cmd = app.add_subcommand("report", "accuracy table from estimate and truth records");
    rep_cmd->add_option("-e,--estimates", rep.estimates, "estimate records")->required();
    rep_cmd->add_option("-t,--truth", rep.truths, "truth records")->required();
    rep_cmd->add_option("--br-tolerance", rep.br_tol, "BR tolerance, bpm (default 1)");
    rep_cmd->add_option("--hr-tolerance", rep.hr_tol, "HR tolerance, bpm (default 2)");
    rep_cmd->add_option("--csv", rep.csv, "also write the table as CSV");

    std::string show;
    auto* list_cmd = app.add_subcommand("list-scenarios", "list built-in scenarios");
    list_cmd->add_option("--show", show, "print the full YAML of one scenario");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    const std::string command = join(args);
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        if (sim_cmd->parsed()) simulate(sim, command, out);
        if (proc_cmd->parsed()) process(proc, command, out);
        if (sw_cmd->parsed()) sweep(sw, command, out);
        if (rep_cmd->parsed()) report(rep, command, out);
        if (list_cmd->parsed()) {
            if (!show.empty()) {
                out << to_yaml(builtin_scenario(show));
            } else {
                for (const auto& s : builtin_scenarios()) {
                    char line[160];
                    std::snprintf(line, sizeof line, "%-26s %s\n", s.name.c_str(), s.description.c_str());
                    out << line;
                }
            }
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace jcv::cli
