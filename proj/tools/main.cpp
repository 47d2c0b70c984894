#include "evodepth/benchmark.hpp"
#include "evodepth/bspline.hpp"
#include "evodepth/detection.hpp"
#include "evodepth/panel_io.hpp"
#include "evodepth/report_io.hpp"
#include "evodepth/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace evodepth;

namespace {

struct BasisSpec {
    std::optional<std::size_t> fixed;
    bool automatic = false;
};

BasisSpec parse_basis(const std::string& text) {
    BasisSpec spec;
    if (text.empty()) return spec;
    if (text == "auto") {
        spec.automatic = true;
        return spec;
    }
    try {
        const long k = std::stol(text);
        if (k < 4) throw std::invalid_argument("");
        spec.fixed = static_cast<std::size_t>(k);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--basis", "expected a basis size >= 4 or 'auto'");
    }
    return spec;
}

// Panel from either an archive directory or a long-format CSV.
MeterPanel load_panel(const std::string& input, std::size_t points) {
    if (fs::is_directory(input)) return read_panel_archive(input);
    if (points == 0)
        throw std::runtime_error("--points is required when reading a long CSV");
    std::vector<std::pair<std::string, CurveSample>> samples;
    for (const LongRecord& record : read_long_csv(input))
        samples.emplace_back(record.meter_id, fold_to_daily(record, points));
    return assemble_panel(samples);
}

int run_simulate(const SimScenario& scenario, const std::string& out_dir) {
    const LabeledPanel labeled = generate(scenario);
    fs::create_directories(out_dir);
    write_panel_archive(labeled.panel, out_dir);
    write_labels_csv(labeled.panel.meter_ids, labeled.outlier_flags,
                     fs::path(out_dir) / "labels.csv");
    write_scenario_json(scenario, fs::path(out_dir) / "scenario.json");
    std::cout << "wrote " << labeled.panel.n_meters() << " meters x "
              << labeled.panel.n_days() << " days x " << labeled.panel.n_points()
              << " points to " << out_dir << " ("
              << scenario.outlier_count() << " outliers)\n";
    return 0;
}

}   // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolution-outlier detection for grouped meters via functional depth"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // --- simulate ---------------------------------------------------------
    SimScenario scenario;
    int sim_model = 1;
    std::string sim_out;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic labeled panel");
    simulate->add_option("--model", sim_model, "Generative model (1 or 2)")
        ->check(CLI::Range(1, 2))->required();
    simulate->add_option("--n", scenario.meters, "Typical meter count")->capture_default_str();
    simulate->add_option("--t", scenario.days, "Day count")->capture_default_str();
    simulate->add_option("--p", scenario.points, "Grid points per day")->capture_default_str();
    simulate->add_option("--frac", scenario.outlier_fraction, "Outlier fraction")->capture_default_str();
    simulate->add_option("--rho", scenario.rho, "Trend duration (model 1)")->capture_default_str();
    simulate->add_option("--eta-eps", scenario.eta_eps, "Group-effect variance")->capture_default_str();
    simulate->add_option("--lambda", scenario.lambda, "Covariance decay")->capture_default_str();
    simulate->add_option("--eta-ups", scenario.eta_ups, "Meter-effect variance")->capture_default_str();
    simulate->add_option("--eta-ups-outlier", scenario.eta_ups_outlier,
                         "Meter-effect variance for outliers")->capture_default_str();
    simulate->add_option("--seed", scenario.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--out", sim_out, "Output archive directory")->required();

    // --- detect -----------------------------------------------------------
    std::string det_input, det_method = "tdepth", det_basis_text, det_out, det_plot;
    int det_deriv = 0;
    double det_gamma = 0.72;
    std::size_t det_points = 0;
    bool det_trim = false;
    double det_trim_threshold = 0.0;
    auto* det = app.add_subcommand("detect", "Flag evolution outliers in a panel");
    det->add_option("input", det_input, "Panel archive directory or long CSV")->required();
    det->add_option("--points", det_points, "Points per day (long CSV input)");
    det->add_option("--method", det_method, "tdepth or stdepth")->capture_default_str();
    det->add_option("--deriv", det_deriv, "Analyse level curves (0) or first derivatives (1)")->capture_default_str()
        ->check(CLI::Range(0, 1));
    det->add_option("--basis", det_basis_text, "B-spline basis size or 'auto'");
    det->add_option("--gamma", det_gamma, "Whisker length parameter")->capture_default_str();
    det->add_flag("--trim", det_trim, "Trim to the nonzero pooled-median window first");
    det->add_option("--trim-threshold", det_trim_threshold, "Pooled-median trim threshold")->capture_default_str();
    det->add_option("--out", det_out, "Report JSON path (stdout if omitted)");
    det->add_option("--plot-csv", det_plot, "Write the depth series + prototype CSV here");

    // --- benchmark --------------------------------------------------------
    BenchmarkConfig bench;
    int bench_model = 1;
    bool bench_full = false;
    std::vector<double> bench_fractions;
    std::vector<std::string> bench_methods;
    std::string bench_out;
    auto* benchmark = app.add_subcommand("benchmark", "Replicate the synthetic TPR/TNR study");
    benchmark->add_option("--model", bench_model, "Generative model (1 or 2)")
        ->check(CLI::Range(1, 2))->required();
    benchmark->add_option("--fractions", bench_fractions, "Outlier fractions");
    benchmark->add_option("--methods", bench_methods, "Methods to evaluate");
    benchmark->add_option("--replicates", bench.replicates, "Replicates per cell")->capture_default_str();
    benchmark->add_flag("--full", bench_full, "Use 100 replicates");
    benchmark->add_option("--seed", bench.base_seed, "Base seed")->capture_default_str();
    benchmark->add_option("--n", bench.meters, "Typical meter count")->capture_default_str();
    benchmark->add_option("--t", bench.days, "Day count")->capture_default_str();
    benchmark->add_option("--p", bench.points, "Grid points per day")->capture_default_str();
    benchmark->add_option("--rho", bench.rho, "Trend duration (model 1)")->capture_default_str();
    benchmark->add_option("--gamma", bench.gamma, "Whisker length parameter")->capture_default_str();
    benchmark->add_option("--out", bench_out, "Also write results as CSV here");

    // --- smooth -----------------------------------------------------------
    std::string smooth_input, smooth_basis_text = "auto", smooth_out;
    int smooth_deriv = 0;
    std::size_t smooth_points = 0;
    auto* smooth = app.add_subcommand("smooth", "Write a smoothed or differentiated panel");
    smooth->add_option("input", smooth_input, "Panel archive directory or long CSV")->required();
    smooth->add_option("--points", smooth_points, "Points per day (long CSV input)");
    smooth->add_option("--basis", smooth_basis_text, "B-spline basis size or 'auto'")->capture_default_str();
    smooth->add_option("--deriv", smooth_deriv, "Fitted values (0) or first derivatives (1)")->capture_default_str()
        ->check(CLI::Range(0, 1));
    smooth->add_option("--out", smooth_out, "Output archive directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            scenario.model = sim_model == 1 ? SimModel::Model1 : SimModel::Model2;
            return run_simulate(scenario, sim_out);
        }

        if (det->parsed()) {
            MeterPanel panel = load_panel(det_input, det_points);
            if (det_trim) panel = trim_nonzero_window(panel, det_trim_threshold);

            const BasisSpec basis = parse_basis(det_basis_text);
            DetectOptions options;
            options.method = parse_method(det_method);
            options.derivative_order = det_deriv;
            options.gamma = det_gamma;
            options.basis = basis.fixed;
            options.auto_basis = basis.automatic;

            DetectionReport report = detect(panel, options);
            report.metadata["input"] = det_input;
            report.metadata["version"] = kVersion;
            report.metadata["trimmed"] = det_trim ? "true" : "false";
            if (det_trim)
                report.metadata["trim_threshold"] = format_double(det_trim_threshold);
            report.metadata["meters"] = std::to_string(panel.n_meters());
            report.metadata["days"] = std::to_string(panel.n_days());
            report.metadata["points"] = std::to_string(panel.n_points());

            if (!det_plot.empty())
                write_depth_plot_csv(report.series, report.prototype_series, det_plot);
            if (det_out.empty())
                std::cout << report_to_json(report);
            else
                write_report(report, det_out);
            std::cerr << "flagged " << report.flagged_ids().size() << " of "
                      << report.meter_ids.size() << " meters (threshold "
                      << report.threshold_value << ")\n";
            return 0;
        }

        if (benchmark->parsed()) {
            bench.model = bench_model == 1 ? SimModel::Model1 : SimModel::Model2;
            if (bench_full) bench.replicates = 100;
            if (!bench_fractions.empty()) bench.fractions = bench_fractions;
            if (!bench_methods.empty()) {
                bench.methods.clear();
                for (const auto& name : bench_methods) bench.methods.push_back(parse_method(name));
            }
            const std::vector<BenchmarkResult> results = run_benchmark(bench);
            std::cout << format_benchmark_table(results);
            if (!bench_out.empty()) {
                std::ofstream out(bench_out);
                if (!out) throw std::runtime_error("cannot open '" + bench_out + "' for writing");
                write_benchmark_csv(results, out);

                nlohmann::json meta;
                meta["model"] = static_cast<int>(bench.model);
                meta["fractions"] = bench.fractions;
                std::vector<std::string> method_names;
                for (Method m : bench.methods) method_names.push_back(to_string(m));
                meta["methods"] = method_names;
                meta["replicates"] = bench.replicates;
                meta["base_seed"] = bench.base_seed;
                meta["meters"] = bench.meters;
                meta["days"] = bench.days;
                meta["points"] = bench.points;
                meta["rho"] = bench.rho;
                meta["gamma"] = bench.gamma;
                meta["rng"] = GaussianRng::kDescription;
                meta["version"] = kVersion;
                std::ofstream meta_out(bench_out + ".meta.json");
                meta_out << meta.dump(2) << "\n";
            }
            return 0;
        }

        if (smooth->parsed()) {
            const MeterPanel panel = load_panel(smooth_input, smooth_points);
            const BasisSpec basis = parse_basis(smooth_basis_text);
            std::size_t chosen = 0;
            const MeterPanel result =
                smooth_panel(panel, basis.fixed, smooth_deriv, &chosen);
            fs::create_directories(smooth_out);
            write_panel_archive(result, smooth_out);
            nlohmann::json meta;
            meta["input"] = smooth_input;
            meta["basis"] = chosen;
            meta["basis_requested"] = smooth_basis_text;
            meta["derivative_order"] = smooth_deriv;
            meta["version"] = kVersion;
            std::ofstream meta_out(fs::path(smooth_out) / "smoothing.json");
            meta_out << meta.dump(2) << "\n";
            std::cout << "wrote smoothed panel (K=" << chosen << ", deriv=" << smooth_deriv
                      << ") to " << smooth_out << "\n";
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
