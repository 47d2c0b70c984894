#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "evodepth/panel.hpp"
#include "evodepth/panel_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace evodepth;
namespace fs = std::filesystem;

namespace {

LongRecord make_record(const std::string& id, std::vector<double> readings) {
    LongRecord rec;
    rec.meter_id = id;
    rec.readings = std::move(readings);
    for (std::size_t i = 0; i < rec.readings.size(); ++i)
        rec.timestamps.push_back(static_cast<std::int64_t>(i));
    return rec;
}

CurveSample day_sample(std::size_t days, std::size_t p, double base) {
    CurveSample s;
    s.grid = Grid::uniform01(p);
    for (std::size_t t = 0; t < days; ++t) {
        s.labels.push_back(std::to_string(t + 1));
        s.values.emplace_back(p, base + static_cast<double>(t));
    }
    return s;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("evodepth_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}   // namespace

TEST_CASE("fold_to_daily reshapes in order") {
    const LongRecord rec = make_record("a", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    const CurveSample s = fold_to_daily(rec, 5);
    CHECK(s.n_curves() == 2);
    CHECK(s.values[0] == std::vector<double>{1, 2, 3, 4, 5});
    CHECK(s.values[1] == std::vector<double>{6, 7, 8, 9, 10});
    CHECK(s.labels == std::vector<std::string>{"1", "2"});
}

TEST_CASE("fold_to_daily rejects a partial day") {
    const LongRecord rec = make_record("a", {1, 2, 3, 4, 5, 6, 7});
    CHECK_THROWS_WITH_AS(fold_to_daily(rec, 5), doctest::Contains("remainder 2"),
                         std::invalid_argument);
}

TEST_CASE("fold_to_daily of one exact day is the identity") {
    const std::vector<double> readings(6, 3.25);
    const CurveSample s = fold_to_daily(make_record("a", readings), 6);
    CHECK(s.n_curves() == 1);
    CHECK(s.values[0] == readings);
}

TEST_CASE("fold then flatten reproduces the record") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(-10, 10);
    std::vector<double> readings(4 * 7);
    for (double& v : readings) v = unif(rng);
    const CurveSample s = fold_to_daily(make_record("a", readings), 7);
    std::vector<double> flat;
    for (const auto& row : s.values) flat.insert(flat.end(), row.begin(), row.end());
    CHECK(flat == readings);
}

TEST_CASE("fold_to_daily rejects non-uniform sampling within a day") {
    LongRecord rec = make_record("a", {1, 2, 3, 4, 5, 6});
    rec.timestamps = {0, 1, 2, 10, 11, 13};   // second day is irregular
    CHECK_THROWS_WITH_AS(fold_to_daily(rec, 3), doctest::Contains("uniformly"),
                         std::invalid_argument);
}

TEST_CASE("assemble_panel stacks matching samples") {
    std::vector<std::pair<std::string, CurveSample>> in;
    in.emplace_back("x", day_sample(2, 4, 0.0));
    in.emplace_back("y", day_sample(2, 4, 1.0));
    in.emplace_back("z", day_sample(2, 4, 2.0));
    const MeterPanel panel = assemble_panel(in);
    CHECK(panel.n_meters() == 3);
    CHECK(panel.n_days() == 2);
    CHECK(panel.n_points() == 4);
    CHECK(panel.meter_ids == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("assemble_panel rejects ragged day counts naming the meter") {
    std::vector<std::pair<std::string, CurveSample>> in;
    in.emplace_back("x", day_sample(2, 4, 0.0));
    in.emplace_back("bad", day_sample(3, 4, 1.0));
    CHECK_THROWS_WITH_AS(assemble_panel(in), doctest::Contains("bad"), std::invalid_argument);
}

TEST_CASE("assemble_panel rejects too few meters") {
    std::vector<std::pair<std::string, CurveSample>> in;
    CHECK_THROWS_AS(assemble_panel(in), std::invalid_argument);
    in.emplace_back("only", day_sample(2, 4, 0.0));
    CHECK_THROWS_AS(assemble_panel(in), std::invalid_argument);
}

TEST_CASE("assemble_panel is permutation-equivariant in meters") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> unif(-1, 1);
    std::vector<std::pair<std::string, CurveSample>> in;
    for (int m = 0; m < 4; ++m) {
        CurveSample s = day_sample(3, 5, 0.0);
        for (auto& row : s.values)
            for (double& v : row) v = unif(rng);
        in.emplace_back("m" + std::to_string(m), s);
    }
    const MeterPanel base = assemble_panel(in);

    std::vector<std::size_t> perm = {2, 0, 3, 1};
    std::vector<std::pair<std::string, CurveSample>> shuffled;
    for (std::size_t i : perm) shuffled.push_back(in[i]);
    const MeterPanel permuted = assemble_panel(shuffled);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        CHECK(permuted.meter_ids[i] == base.meter_ids[perm[i]]);
        CHECK(permuted.values[i] == base.values[perm[i]]);
    }
}

namespace {

MeterPanel window_panel(std::size_t lo, std::size_t hi, std::size_t p) {
    // positive plateau on [lo, hi], zero elsewhere
    std::vector<std::pair<std::string, CurveSample>> in;
    for (int m = 0; m < 3; ++m) {
        CurveSample s;
        s.grid = Grid::uniform01(p);
        for (std::size_t t = 0; t < 2; ++t) {
            s.labels.push_back(std::to_string(t + 1));
            std::vector<double> row(p, 0.0);
            for (std::size_t k = lo; k <= hi; ++k) row[k] = 1.0 + static_cast<double>(m);
            s.values.push_back(row);
        }
        in.emplace_back("m" + std::to_string(m), s);
    }
    return assemble_panel(in);
}

}   // namespace

TEST_CASE("trim_nonzero_window keeps an all-positive panel intact") {
    std::vector<std::pair<std::string, CurveSample>> in;
    in.emplace_back("x", day_sample(2, 5, 1.0));
    in.emplace_back("y", day_sample(2, 5, 2.0));
    const MeterPanel panel = assemble_panel(in);
    const MeterPanel trimmed = trim_nonzero_window(panel);
    CHECK(trimmed.grid.points == panel.grid.points);
    CHECK(trimmed.values == panel.values);
}

TEST_CASE("trim_nonzero_window finds the plateau window") {
    const MeterPanel panel = window_panel(10, 40, 60);
    const MeterPanel trimmed = trim_nonzero_window(panel);
    CHECK(trimmed.n_points() == 31);
    CHECK(trimmed.grid.points.front() == panel.grid.points[10]);
    CHECK(trimmed.grid.points.back() == panel.grid.points[40]);
    for (const auto& meter : trimmed.values)
        for (const auto& day : meter)
            for (double v : day) CHECK(v > 0.0);
}

TEST_CASE("trim_nonzero_window rejects an all-zero panel") {
    std::vector<std::pair<std::string, CurveSample>> in;
    in.emplace_back("x", day_sample(2, 5, 0.0));
    in.emplace_back("y", day_sample(2, 5, 0.0));
    MeterPanel panel = assemble_panel(in);
    for (auto& meter : panel.values)
        for (auto& day : meter)
            for (double& v : day) v = 0.0;
    CHECK_THROWS_AS(trim_nonzero_window(panel), std::invalid_argument);
}

TEST_CASE("trim_nonzero_window is idempotent") {
    const MeterPanel panel = window_panel(3, 17, 25);
    const MeterPanel once = trim_nonzero_window(panel);
    const MeterPanel twice = trim_nonzero_window(once);
    CHECK(once.grid.points == twice.grid.points);
    CHECK(once.values == twice.values);
}

TEST_CASE("long CSV ingestion") {
    TempDir tmp;
    const fs::path file = tmp.path / "long.csv";
    {
        std::ofstream out(file);
        out << "meter_id,timestamp,value\n";
        for (int m = 0; m < 2; ++m)
            for (int u = 0; u < 6; ++u)
                out << "m" << m << "," << u << "," << (m * 100 + u) << "\n";
    }
    const auto records = read_long_csv(file);
    REQUIRE(records.size() == 2);
    CHECK(records[0].meter_id == "m0");
    CHECK(records[0].size() == 6);
    CHECK(records[1].readings.front() == 100.0);
    const CurveSample s = fold_to_daily(records[0], 3);
    CHECK(s.n_curves() == 2);
}

TEST_CASE("long CSV accepts ISO-8601 timestamps") {
    TempDir tmp;
    const fs::path file = tmp.path / "iso.csv";
    {
        std::ofstream out(file);
        out << "meter_id,timestamp,value\n";
        out << "a,2023-05-01T00:00:00,1.5\n";
        out << "a,2023-05-01T01:00:00,2.5\n";
        out << "a,2023-05-01 02:00,3.5\n";
    }
    const auto records = read_long_csv(file);
    REQUIRE(records.size() == 1);
    CHECK(records[0].timestamps[1] - records[0].timestamps[0] == 3600);
    CHECK(records[0].timestamps[2] - records[0].timestamps[1] == 3600);
}

TEST_CASE("long CSV rejects a non-numeric reading with its line number") {
    TempDir tmp;
    const fs::path file = tmp.path / "bad.csv";
    {
        std::ofstream out(file);
        out << "meter_id,timestamp,value\n";
        out << "a,0,1.0\n";
        out << "a,1,oops\n";
    }
    CHECK_THROWS_WITH_AS(read_long_csv(file), doctest::Contains("line 3"), std::runtime_error);
}

TEST_CASE("panel archive round trip is exact") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(-3, 3);
    std::vector<std::pair<std::string, CurveSample>> in;
    for (int m = 0; m < 3; ++m) {
        CurveSample s = day_sample(4, 6, 0.0);
        for (auto& row : s.values)
            for (double& v : row) v = unif(rng);
        in.emplace_back("m" + std::to_string(m), s);
    }
    const MeterPanel panel = assemble_panel(in);

    TempDir tmp;
    write_panel_archive(panel, tmp.path / "archive");
    const MeterPanel back = read_panel_archive(tmp.path / "archive");
    CHECK(back.meter_ids == panel.meter_ids);
    CHECK(back.day_index == panel.day_index);
    CHECK(back.grid.points == panel.grid.points);
    CHECK(back.values == panel.values);
}

TEST_CASE("panel archive reads without a meters.csv manifest") {
    std::vector<std::pair<std::string, CurveSample>> in;
    in.emplace_back("a", day_sample(2, 4, 0.0));
    in.emplace_back("b", day_sample(2, 4, 5.0));
    const MeterPanel panel = assemble_panel(in);
    TempDir tmp;
    write_panel_archive(panel, tmp.path / "archive");
    fs::remove(tmp.path / "archive" / "meters.csv");
    const MeterPanel back = read_panel_archive(tmp.path / "archive");
    CHECK(back.meter_ids == panel.meter_ids);
    CHECK(back.values == panel.values);
}

TEST_CASE("labels csv round trip") {
    TempDir tmp;
    const std::vector<std::string> ids = {"a", "b", "c"};
    const std::vector<bool> flags = {false, true, false};
    write_labels_csv(ids, flags, tmp.path / "labels.csv");
    const auto back = read_labels_csv(tmp.path / "labels.csv");
    REQUIRE(back.size() == 3);
    CHECK(back[1].first == "b");
    CHECK(back[1].second);
    CHECK_FALSE(back[0].second);
}

TEST_CASE("archive round trip survives extreme values") {
    std::vector<std::pair<std::string, CurveSample>> in;
    CurveSample s;
    s.grid = Grid::uniform01(6);
    s.labels = {"1", "2"};
    s.values = {{0.0, -0.0, 5e-324, -1.7976931348623157e308, 0.1, 1.0 / 3.0},
                {1e-300, 2.2250738585072014e-308, -123456789.123456789, 3.14159265358979323846,
                 -5e-324, 42.0}};
    in.emplace_back("a", s);
    in.emplace_back("b", s);
    const MeterPanel panel = assemble_panel(in);

    TempDir tmp;
    write_panel_archive(panel, tmp.path / "archive");
    const MeterPanel back = read_panel_archive(tmp.path / "archive");
    CHECK(back.values == panel.values);
}

TEST_CASE("scenario json round trip") {
    SimScenario scenario;
    scenario.model = SimModel::Model2;
    scenario.meters = 37;
    scenario.days = 41;
    scenario.points = 29;
    scenario.outlier_fraction = 0.1;
    scenario.rho = 7;
    scenario.eta_eps = 0.85;
    scenario.lambda = 0.12;
    scenario.eta_ups = 1.25;
    scenario.eta_ups_outlier = 0.45;
    scenario.seed = 12345678901234567ULL;

    TempDir tmp;
    write_scenario_json(scenario, tmp.path / "scenario.json");
    const SimScenario back = read_scenario_json(tmp.path / "scenario.json");
    CHECK(back.model == scenario.model);
    CHECK(back.meters == scenario.meters);
    CHECK(back.days == scenario.days);
    CHECK(back.points == scenario.points);
    CHECK(back.outlier_fraction == scenario.outlier_fraction);
    CHECK(back.rho == scenario.rho);
    CHECK(back.eta_eps == scenario.eta_eps);
    CHECK(back.lambda == scenario.lambda);
    CHECK(back.eta_ups == scenario.eta_ups);
    CHECK(back.eta_ups_outlier == scenario.eta_ups_outlier);
    CHECK(back.seed == scenario.seed);
}

TEST_CASE("grid validation") {
    Grid g;
    g.points = {0.0, 0.5, 0.5};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g.points = {0.0};
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g.points = {0.0, 0.5, 1.0};
    CHECK_NOTHROW(g.validate());
}
