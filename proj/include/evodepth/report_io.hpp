#pragma once

#include "evodepth/detection.hpp"

#include <filesystem>

namespace evodepth {

/// Detection report JSON:
/// {method, derivative_order, gamma, medcouple, q3, iqr, threshold,
///  meters: [{id, distance, flagged}], prototype: [..], metadata: {..}}.
/// Numbers survive a write/read round trip exactly. No timestamps are
/// written, so identical runs produce byte-identical files.
void write_report(const DetectionReport& report, const std::filesystem::path& path);
DetectionReport read_report(const std::filesystem::path& path);

/// The same JSON document as write_report produces, as a string.
std::string report_to_json(const DetectionReport& report);

/// Plot-ready CSV of the per-meter depth series and the prototype: one
/// column per meter, one row per day.
void write_depth_plot_csv(const DepthPanel& dp, const std::vector<double>& prototype_series,
                          const std::filesystem::path& path);

}   // namespace evodepth
