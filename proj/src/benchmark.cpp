#include "evodepth/benchmark.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace evodepth {

std::pair<double, double> tpr_tnr(const std::vector<bool>& flags,
                                  const std::vector<bool>& truth) {
    if (flags.size() != truth.size())
        throw std::invalid_argument("tpr_tnr: flag/truth length mismatch");
    std::size_t positives = 0, negatives = 0, true_pos = 0, true_neg = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) {
            ++positives;
            if (flags[i]) ++true_pos;
        } else {
            ++negatives;
            if (!flags[i]) ++true_neg;
        }
    }
    if (positives == 0 || negatives == 0)
        throw std::invalid_argument("tpr_tnr: truth must contain both classes");
    return {static_cast<double>(true_pos) / static_cast<double>(positives),
            static_cast<double>(true_neg) / static_cast<double>(negatives)};
}

std::vector<BenchmarkResult> run_benchmark(const BenchmarkConfig& config) {
    if (config.replicates < 1) throw std::invalid_argument("run_benchmark: replicates >= 1 required");
    if (config.fractions.empty() || config.methods.empty())
        throw std::invalid_argument("run_benchmark: fractions and methods must be nonempty");

    std::vector<BenchmarkResult> results;
    for (double fraction : config.fractions) {
        std::vector<BenchmarkResult> cells;
        for (Method method : config.methods)
            cells.push_back({config.model, fraction, method, config.replicates, 0.0, 0.0, {}, {}, {}});

        for (std::size_t r = 0; r < config.replicates; ++r) {
            SimScenario scenario;
            scenario.model = config.model;
            scenario.meters = config.meters;
            scenario.days = config.days;
            scenario.points = config.points;
            scenario.outlier_fraction = fraction;
            scenario.rho = config.rho;
            scenario.seed = config.base_seed + r;
            if (scenario.outlier_count() == 0)
                throw std::invalid_argument(
                    "run_benchmark: fraction " + std::to_string(fraction) + " with N=" +
                    std::to_string(config.meters) + " meters plants no outliers");

            const LabeledPanel labeled = generate(scenario);
            for (std::size_t m = 0; m < config.methods.size(); ++m) {
                DetectOptions options;
                options.method = config.methods[m];
                options.gamma = config.gamma;
                const DetectionReport report = detect(labeled.panel, options);
                const auto [tpr, tnr] = tpr_tnr(report.flagged, labeled.outlier_flags);
                cells[m].tpr.push_back(tpr);
                cells[m].tnr.push_back(tnr);
                cells[m].seeds.push_back(scenario.seed);
            }
        }

        for (auto& cell : cells) {
            cell.tpr_mean = std::accumulate(cell.tpr.begin(), cell.tpr.end(), 0.0) /
                            static_cast<double>(cell.tpr.size());
            cell.tnr_mean = std::accumulate(cell.tnr.begin(), cell.tnr.end(), 0.0) /
                            static_cast<double>(cell.tnr.size());
            results.push_back(std::move(cell));
        }
    }
    return results;
}

std::string format_benchmark_table(const std::vector<BenchmarkResult>& results) {
    if (results.empty()) return "";

    std::vector<double> fractions;
    std::vector<Method> methods;
    for (const auto& r : results) {
        if (std::find(fractions.begin(), fractions.end(), r.fraction) == fractions.end())
            fractions.push_back(r.fraction);
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
            methods.push_back(r.method);
    }

    std::ostringstream out;
    out << std::left << std::setw(10) << "Outliers";
    for (double f : fractions) {
        std::ostringstream label;
        label << f * 100.0 << "%";
        out << std::setw(16) << label.str();
    }
    out << "\n" << std::setw(10) << "";
    for (std::size_t i = 0; i < fractions.size(); ++i)
        out << std::setw(8) << "TPR" << std::setw(8) << "TNR";
    out << "\n";

    out << std::fixed << std::setprecision(3);
    for (Method method : methods) {
        out << std::setw(10) << to_string(method);
        for (double f : fractions) {
            const auto it = std::find_if(results.begin(), results.end(), [&](const auto& r) {
                return r.method == method && r.fraction == f;
            });
            if (it != results.end())
                out << std::setw(8) << it->tpr_mean << std::setw(8) << it->tnr_mean;
            else
                out << std::setw(8) << "-" << std::setw(8) << "-";
        }
        out << "\n";
    }
    return out.str();
}

void write_benchmark_csv(const std::vector<BenchmarkResult>& results, std::ostream& out) {
    out << "model,fraction,method,replicates,tpr_mean,tnr_mean\n";
    for (const auto& r : results) {
        out << static_cast<int>(r.model) << "," << r.fraction << "," << to_string(r.method)
            << "," << r.replicates << "," << r.tpr_mean << "," << r.tnr_mean << "\n";
    }
}

}   // namespace evodepth
