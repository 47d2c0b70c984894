#include "evodepth/panel_io.hpp"

#include "evodepth/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evodepth {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace {

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(strip(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

bool parse_int(const std::string& s, std::int64_t& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

// Days since 1970-01-01 (proleptic Gregorian), Howard Hinnant's algorithm.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

// ISO-8601 "YYYY-MM-DD[T ]HH:MM[:SS]" to epoch seconds (no timezone math).
bool parse_iso8601(const std::string& s, std::int64_t& out) {
    if (s.size() != 16 && s.size() != 19) return false;
    const auto digit = [&](std::size_t i) { return s[i] >= '0' && s[i] <= '9'; };
    const auto num = [&](std::size_t i, std::size_t len) {
        int v = 0;
        for (std::size_t k = i; k < i + len; ++k) v = v * 10 + (s[k] - '0');
        return v;
    };
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u})
        if (!digit(i)) return false;
    if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':') return false;

    int second = 0;
    if (s.size() == 19) {
        if (s[16] != ':' || !digit(17) || !digit(18)) return false;
        second = num(17, 2);
    }
    const int year = num(0, 4), month = num(5, 2), day = num(8, 2);
    const int hour = num(11, 2), minute = num(14, 2);
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    if (hour > 23 || minute > 59 || second > 60) return false;
    out = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
          hour * 3600 + minute * 60 + second;
    return true;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void check_meter_id_for_path(const std::string& id) {
    if (id.empty() || id.find('/') != std::string::npos || id.find('\\') != std::string::npos ||
        id.find("..") != std::string::npos)
        throw std::invalid_argument("meter id '" + id + "' is not usable as a file name");
}

}   // namespace

std::vector<LongRecord> read_long_csv(const fs::path& path) {
    std::ifstream in = open_input(path);

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path.string() + ": empty file");
    {
        const auto header = split_csv(line);
        if (header != std::vector<std::string>{"meter_id", "timestamp", "value"})
            throw std::runtime_error(path.string() +
                                     ": line 1: expected header 'meter_id,timestamp,value'");
    }

    std::vector<LongRecord> records;
    std::vector<std::string> order;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        const auto fields = split_csv(line);
        const std::string where = path.string() + ": line " + std::to_string(line_no);
        if (fields.size() != 3)
            throw std::runtime_error(where + ": expected 3 fields, got " +
                                     std::to_string(fields.size()));

        std::int64_t ts;
        if (!parse_int(fields[1], ts) && !parse_iso8601(fields[1], ts))
            throw std::runtime_error(where + ": unparseable timestamp '" + fields[1] + "'");
        double value;
        if (!parse_double(fields[2], value))
            throw std::runtime_error(where + ": non-numeric reading '" + fields[2] + "'");

        auto it = std::find(order.begin(), order.end(), fields[0]);
        if (it == order.end()) {
            order.push_back(fields[0]);
            records.push_back({fields[0], {}, {}});
            it = order.end() - 1;
        }
        LongRecord& rec = records[static_cast<std::size_t>(it - order.begin())];
        if (!rec.timestamps.empty() && ts <= rec.timestamps.back())
            throw std::runtime_error(where + ": timestamps for meter '" + fields[0] +
                                     "' are not strictly increasing");
        rec.timestamps.push_back(ts);
        rec.readings.push_back(value);
    }
    if (records.empty()) throw std::runtime_error(path.string() + ": no data rows");
    return records;
}

void write_panel_archive(const MeterPanel& panel, const fs::path& dir) {
    panel.validate();
    for (const auto& id : panel.meter_ids) check_meter_id_for_path(id);
    fs::create_directories(dir);

    {
        std::ofstream out = open_output(dir / "grid.csv");
        out << "x\n";
        for (double x : panel.grid.points) out << format_double(x) << "\n";
    }
    {
        std::ofstream out = open_output(dir / "days.csv");
        out << "day\n";
        for (const auto& d : panel.day_index) out << d << "\n";
    }
    {
        std::ofstream out = open_output(dir / "meters.csv");
        out << "meter_id\n";
        for (const auto& id : panel.meter_ids) out << id << "\n";
    }
    for (std::size_t i = 0; i < panel.n_meters(); ++i) {
        std::ofstream out = open_output(dir / ("meter_" + panel.meter_ids[i] + ".csv"));
        for (const auto& day : panel.values[i]) {
            for (std::size_t k = 0; k < day.size(); ++k)
                out << (k ? "," : "") << format_double(day[k]);
            out << "\n";
        }
    }
}

namespace {

std::vector<std::string> read_single_column(const fs::path& path, const std::string& header) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || strip(line) != header)
        throw std::runtime_error(path.string() + ": expected header '" + header + "'");
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        const std::string v = strip(line);
        if (!v.empty()) rows.push_back(v);
    }
    return rows;
}

}   // namespace

MeterPanel read_panel_archive(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw std::runtime_error("panel archive '" + dir.string() + "' is not a directory");

    MeterPanel panel;
    for (const std::string& x : read_single_column(dir / "grid.csv", "x")) {
        double v;
        if (!parse_double(x, v))
            throw std::runtime_error(dir.string() + "/grid.csv: non-numeric abscissa '" + x + "'");
        panel.grid.points.push_back(v);
    }
    panel.day_index = read_single_column(dir / "days.csv", "day");

    if (fs::exists(dir / "meters.csv")) {
        panel.meter_ids = read_single_column(dir / "meters.csv", "meter_id");
    } else {
        // No manifest: fall back to the meter files in lexicographic order.
        for (const auto& entry : fs::directory_iterator(dir)) {
            const std::string name = entry.path().filename().string();
            if (name.starts_with("meter_") && name.ends_with(".csv"))
                panel.meter_ids.push_back(name.substr(6, name.size() - 10));
        }
        std::sort(panel.meter_ids.begin(), panel.meter_ids.end());
    }

    panel.values.reserve(panel.meter_ids.size());
    for (const auto& id : panel.meter_ids) {
        const fs::path file = dir / ("meter_" + id + ".csv");
        std::ifstream in = open_input(file);
        std::vector<std::vector<double>> days;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (strip(line).empty()) continue;
            std::vector<double> row;
            for (const std::string& cell : split_csv(line)) {
                double v;
                if (!parse_double(cell, v))
                    throw std::runtime_error(file.string() + ": line " + std::to_string(line_no) +
                                             ": non-numeric value '" + cell + "'");
                row.push_back(v);
            }
            days.push_back(std::move(row));
        }
        panel.values.push_back(std::move(days));
    }
    panel.validate();
    return panel;
}

void write_labels_csv(const std::vector<std::string>& meter_ids,
                      const std::vector<bool>& outlier_flags, const fs::path& path) {
    if (meter_ids.size() != outlier_flags.size())
        throw std::invalid_argument("write_labels_csv: id/flag length mismatch");
    std::ofstream out = open_output(path);
    out << "meter_id,is_outlier\n";
    for (std::size_t i = 0; i < meter_ids.size(); ++i)
        out << meter_ids[i] << "," << (outlier_flags[i] ? 1 : 0) << "\n";
}

std::vector<std::pair<std::string, bool>> read_labels_csv(const fs::path& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || strip(line) != "meter_id,is_outlier")
        throw std::runtime_error(path.string() + ": expected header 'meter_id,is_outlier'");
    std::vector<std::pair<std::string, bool>> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 2 || (fields[1] != "0" && fields[1] != "1"))
            throw std::runtime_error(path.string() + ": line " + std::to_string(line_no) +
                                     ": expected 'meter_id,0|1'");
        labels.emplace_back(fields[0], fields[1] == "1");
    }
    return labels;
}

void write_scenario_json(const SimScenario& scenario, const fs::path& path) {
    json j;
    j["model"] = static_cast<int>(scenario.model);
    j["meters"] = scenario.meters;
    j["days"] = scenario.days;
    j["points"] = scenario.points;
    j["outlier_fraction"] = scenario.outlier_fraction;
    j["rho"] = scenario.rho;
    j["eta_eps"] = scenario.eta_eps;
    j["lambda"] = scenario.lambda;
    j["eta_ups"] = scenario.eta_ups;
    j["eta_ups_outlier"] = scenario.eta_ups_outlier;
    j["seed"] = scenario.seed;
    j["grid"] = "uniform01";
    j["rng"] = GaussianRng::kDescription;
    j["version"] = kVersion;

    std::ofstream out = open_output(path);
    out << j.dump(2) << "\n";
}

SimScenario read_scenario_json(const fs::path& path) {
    std::ifstream in = open_input(path);
    json j;
    in >> j;

    SimScenario scenario;
    const int model = j.at("model").get<int>();
    if (model != 1 && model != 2)
        throw std::runtime_error(path.string() + ": model must be 1 or 2");
    scenario.model = model == 1 ? SimModel::Model1 : SimModel::Model2;
    scenario.meters = j.at("meters").get<std::size_t>();
    scenario.days = j.at("days").get<std::size_t>();
    scenario.points = j.at("points").get<std::size_t>();
    scenario.outlier_fraction = j.at("outlier_fraction").get<double>();
    scenario.rho = j.at("rho").get<std::size_t>();
    scenario.eta_eps = j.at("eta_eps").get<double>();
    scenario.lambda = j.at("lambda").get<double>();
    scenario.eta_ups = j.at("eta_ups").get<double>();
    scenario.eta_ups_outlier = j.at("eta_ups_outlier").get<double>();
    scenario.seed = j.at("seed").get<std::uint64_t>();
    return scenario;
}

}   // namespace evodepth
