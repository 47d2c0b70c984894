#pragma once

#include "evodepth/detection.hpp"
#include "evodepth/simulation.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace evodepth {

/// True positive rate (flagged outliers / outliers) and true negative rate
/// (unflagged non-outliers / non-outliers). The truth vector must contain
/// both classes.
std::pair<double, double> tpr_tnr(const std::vector<bool>& flags,
                                  const std::vector<bool>& truth);

struct BenchmarkConfig {
    SimModel model = SimModel::Model1;
    std::vector<double> fractions = {0.01, 0.05, 0.10};
    std::vector<Method> methods = {Method::TDepth, Method::STDepth};
    std::size_t replicates = 20;
    std::uint64_t base_seed = 1;
    std::size_t meters = 100;
    std::size_t days = 50;
    std::size_t points = 50;
    std::size_t rho = 5;
    double gamma = 0.72;
};

struct BenchmarkResult {
    SimModel model;
    double fraction;
    Method method;
    std::size_t replicates;
    double tpr_mean;
    double tnr_mean;
    std::vector<double> tpr;             // per replicate
    std::vector<double> tnr;
    std::vector<std::uint64_t> seeds;
};

/// For every (fraction, method) cell: generates `replicates` labeled panels
/// with seeds base_seed + replicate index, runs detection and averages
/// TPR/TNR. Both methods are evaluated on the same panels.
std::vector<BenchmarkResult> run_benchmark(const BenchmarkConfig& config);

/// Aligned text table, one row per method, fraction groups as columns.
std::string format_benchmark_table(const std::vector<BenchmarkResult>& results);

/// CSV with header model,fraction,method,replicates,tpr_mean,tnr_mean.
void write_benchmark_csv(const std::vector<BenchmarkResult>& results, std::ostream& out);

}   // namespace evodepth
