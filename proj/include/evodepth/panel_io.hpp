#pragma once

#include "evodepth/panel.hpp"
#include "evodepth/simulation.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace evodepth {

/// Reads a long-format CSV with header `meter_id,timestamp,value` into one
/// record per meter, in first-appearance order. Timestamps are ISO-8601
/// (treated as UTC) or plain integer sample indices. Malformed rows are
/// rejected with their line number.
std::vector<LongRecord> read_long_csv(const std::filesystem::path& path);

/// Panel archive: a directory with grid.csv, days.csv, meters.csv (meter
/// order manifest) and one meter_<id>.csv of T rows x p columns per meter.
/// Values are written with shortest round-trip formatting, so write-then-read
/// reproduces the panel exactly.
void write_panel_archive(const MeterPanel& panel, const std::filesystem::path& dir);
MeterPanel read_panel_archive(const std::filesystem::path& dir);

void write_labels_csv(const std::vector<std::string>& meter_ids,
                      const std::vector<bool>& outlier_flags,
                      const std::filesystem::path& path);
std::vector<std::pair<std::string, bool>> read_labels_csv(const std::filesystem::path& path);

void write_scenario_json(const SimScenario& scenario, const std::filesystem::path& path);
SimScenario read_scenario_json(const std::filesystem::path& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}   // namespace evodepth
