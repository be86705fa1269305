#include "jcv/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace jcv {
namespace {

VitalComparison compare(std::optional<double> radar, std::optional<double> reference, double tol) {
    VitalComparison c;
    c.radar_bpm = radar;
    c.reference_bpm = reference;
    if (radar && reference) {
        c.abs_error_bpm = std::abs(*radar - *reference);
        c.status = *c.abs_error_bpm <= tol ? RowStatus::Pass : RowStatus::Fail;
    } else if (reference) {
        c.status = RowStatus::Missed;
    } else if (radar) {
        c.status = RowStatus::Fail;
    }
    return c;
}

std::string cell(const std::optional<double>& v) {
    if (!v) return "--";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *v);
    return buf;
}

}  // namespace

std::string to_string(RowStatus status) {
    switch (status) {
        case RowStatus::Pass: return "pass";
        case RowStatus::Fail: return "fail";
        case RowStatus::Missed: return "missed";
    }
    return "?";
}

std::size_t AccuracyReport::count(RowStatus status) const {
    std::size_t n = 0;
    for (const auto& r : rows) n += (r.br.status == status) + (r.hr.status == status);
    return n;
}

AccuracyReport build_report(const std::vector<EstimateRecord>& estimates, const std::vector<TruthRecord>& truths,
                            const ReportTolerances& tolerances) {
    using Key = std::pair<std::string, std::size_t>;
    std::map<Key, const EstimateRecord*> by_id;
    for (const auto& e : estimates) {
        if (!by_id.emplace(Key{e.scenario, e.target_id}, &e).second)
            throw DataError("duplicate estimate for scenario '" + e.scenario + "' target " + std::to_string(e.target_id));
    }
    std::map<Key, const TruthRecord*> truth_ids;
    for (const auto& t : truths)
        if (!truth_ids.emplace(Key{t.scenario, t.target_id}, &t).second)
            throw DataError("duplicate truth for scenario '" + t.scenario + "' target " + std::to_string(t.target_id));
    for (const auto& [key, e] : by_id)
        if (!truth_ids.count(key))
            throw DataError("estimate for scenario '" + key.first + "' target " + std::to_string(key.second) +
                            " has no matching truth record");

    AccuracyReport report;
    report.tolerances = tolerances;
    for (const auto& t : truths) {
        ReportRow row;
        row.scenario = t.scenario;
        row.target_id = t.target_id;
        row.range_m = t.range_m;
        const auto it = by_id.find({t.scenario, t.target_id});
        const EstimateRecord* e = it == by_id.end() ? nullptr : it->second;
        row.detected = e != nullptr;
        if (e) row.range_m = e->range_m;
        row.br = compare(e ? e->br_bpm : std::nullopt, t.br_bpm, tolerances.br_bpm);
        row.hr = compare(e ? e->hr_bpm : std::nullopt, t.hr_bpm, tolerances.hr_bpm);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string format_table(const AccuracyReport& report) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-26s %3s %7s | %14s %18s %7s %-6s | %14s %18s %7s %-6s\n", "Scenario", "Id",
                  "Range", "Radar BR [bpm]", "Reference BR [bpm]", "BR err", "", "Radar HR [bpm]",
                  "Reference HR [bpm]", "HR err", "");
    out << line;
    out << std::string(136, '-') << '\n';
    for (const auto& r : report.rows) {
        std::snprintf(line, sizeof line, "%-26s %3zu %6.2fm | %14s %18s %7s %-6s | %14s %18s %7s %-6s\n",
                      r.scenario.c_str(), r.target_id, r.range_m, cell(r.br.radar_bpm).c_str(),
                      cell(r.br.reference_bpm).c_str(), cell(r.br.abs_error_bpm).c_str(),
                      to_string(r.br.status).c_str(), cell(r.hr.radar_bpm).c_str(), cell(r.hr.reference_bpm).c_str(),
                      cell(r.hr.abs_error_bpm).c_str(), to_string(r.hr.status).c_str());
        out << line;
    }
    std::snprintf(line, sizeof line, "pass %zu  fail %zu  missed %zu  (tolerance BR %.1f bpm, HR %.1f bpm)\n",
                  report.count(RowStatus::Pass), report.count(RowStatus::Fail), report.count(RowStatus::Missed),
                  report.tolerances.br_bpm, report.tolerances.hr_bpm);
    out << line;
    return out.str();
}

std::string format_csv(const AccuracyReport& report) {
    std::ostringstream out;
    out << "scenario,target_id,range_m,radar_br_bpm,reference_br_bpm,br_error_bpm,br_status,"
           "radar_hr_bpm,reference_hr_bpm,hr_error_bpm,hr_status\n";
    auto v = [](const std::optional<double>& x) { return x ? std::to_string(*x) : std::string(); };
    for (const auto& r : report.rows)
        out << r.scenario << ',' << r.target_id << ',' << r.range_m << ',' << v(r.br.radar_bpm) << ','
            << v(r.br.reference_bpm) << ',' << v(r.br.abs_error_bpm) << ',' << to_string(r.br.status) << ','
            << v(r.hr.radar_bpm) << ',' << v(r.hr.reference_bpm) << ',' << v(r.hr.abs_error_bpm) << ','
            << to_string(r.hr.status) << '\n';
    return out.str();
}

}  // namespace jcv
