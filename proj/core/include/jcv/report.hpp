#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jcv/config.hpp"
#include "jcv/records.hpp"

namespace jcv {

enum class RowStatus {
    Pass,     ///< within tolerance, or correctly reported absent
    Fail,     ///< outside tolerance, or reported where truth is absent
    Missed,   ///< truth present, estimate absent
};

std::string to_string(RowStatus status);

struct VitalComparison {
    std::optional<double> radar_bpm;
    std::optional<double> reference_bpm;
    std::optional<double> abs_error_bpm;
    RowStatus status = RowStatus::Pass;
};

struct ReportRow {
    std::string scenario;
    std::size_t target_id = 0;
    double range_m = 0.0;
    bool detected = false;
    VitalComparison br;
    VitalComparison hr;
};

struct AccuracyReport {
    std::vector<ReportRow> rows;
    ReportTolerances tolerances;

    std::size_t count(RowStatus status) const;
};

/// Pair estimates with truths by (scenario, target_id). An estimate with no
/// matching truth raises DataError; a truth with no estimate yields a row
/// whose vitals are marked missed.
AccuracyReport build_report(const std::vector<EstimateRecord>& estimates, const std::vector<TruthRecord>& truths,
                            const ReportTolerances& tolerances = {});

/// Fixed-width table in the measured-results layout.
std::string format_table(const AccuracyReport& report);
std::string format_csv(const AccuracyReport& report);

}  // namespace jcv
