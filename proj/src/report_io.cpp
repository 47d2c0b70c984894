#include "evodepth/report_io.hpp"

#include "evodepth/panel_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>

namespace evodepth {

namespace fs = std::filesystem;
using nlohmann::json;

std::string report_to_json(const DetectionReport& report) {
    json meters = json::array();
    for (std::size_t i = 0; i < report.meter_ids.size(); ++i)
        meters.push_back({{"id", report.meter_ids[i]},
                          {"distance", report.distance[i]},
                          {"flagged", static_cast<bool>(report.flagged[i])}});

    json j;
    j["method"] = to_string(report.method);
    j["derivative_order"] = report.derivative_order;
    j["gamma"] = report.gamma;
    j["medcouple"] = report.medcouple_value;
    j["q3"] = report.q3;
    j["iqr"] = report.iqr;
    j["threshold"] = report.threshold_value;
    j["meters"] = meters;
    j["prototype"] = report.prototype_series;
    j["metadata"] = report.metadata;
    return j.dump(2) + "\n";
}

void write_report(const DetectionReport& report, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << report_to_json(report);
}

DetectionReport read_report(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    json j;
    in >> j;

    DetectionReport report;
    report.method = parse_method(j.at("method").get<std::string>());
    report.derivative_order = j.at("derivative_order").get<int>();
    report.gamma = j.at("gamma").get<double>();
    report.medcouple_value = j.at("medcouple").get<double>();
    report.q3 = j.at("q3").get<double>();
    report.iqr = j.at("iqr").get<double>();
    report.threshold_value = j.at("threshold").get<double>();
    for (const auto& m : j.at("meters")) {
        report.meter_ids.push_back(m.at("id").get<std::string>());
        report.distance.push_back(m.at("distance").get<double>());
        report.flagged.push_back(m.at("flagged").get<bool>());
    }
    report.prototype_series = j.at("prototype").get<std::vector<double>>();
    report.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    return report;
}

void write_depth_plot_csv(const DepthPanel& dp, const std::vector<double>& prototype_series,
                          const fs::path& path) {
    if (prototype_series.size() != dp.n_days())
        throw std::invalid_argument("write_depth_plot_csv: prototype length mismatch");

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << "day";
    for (const auto& id : dp.meter_ids) out << "," << id;
    out << ",prototype\n";
    for (std::size_t t = 0; t < dp.n_days(); ++t) {
        out << dp.day_index[t];
        for (const auto& row : dp.rows) out << "," << format_double(row[t]);
        out << "," << format_double(prototype_series[t]) << "\n";
    }
}

}   // namespace evodepth
