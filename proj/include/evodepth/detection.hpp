#pragma once

#include "evodepth/depth.hpp"
#include "evodepth/panel.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace evodepth {

/// TDepth analyses series of plain band depths, STDepth series of scaled
/// depths.
enum class Method { TDepth, STDepth };

std::string to_string(Method method);
Method parse_method(const std::string& name);

/// Per-meter depth time series: row i holds the depth of each of meter i's
/// daily curves within that meter's own day sample.
struct DepthPanel {
    DepthKind kind = DepthKind::Mbd;
    std::vector<std::string> meter_ids;
    std::vector<std::string> day_index;
    std::vector<std::vector<double>> rows;   // N x T

    std::size_t n_meters() const { return rows.size(); }
    std::size_t n_days() const { return day_index.size(); }
};

/// Robust estimate of the group's depth evolution: the pointwise mean of
/// the ceil(N/2) deepest depth series.
struct Prototype {
    std::vector<double> series;   // length T
    std::size_t trim_count = 0;   // number of series averaged
};

/// Computes the per-meter depth (or scaled depth) series of a panel.
/// `kind` must be Mbd or ScaledMbd.
DepthPanel depth_series(const MeterPanel& panel, DepthKind kind);

/// Ranks the N series by applying MBD to them as curves over the day axis
/// and averages the ceil(N/2) deepest.
Prototype prototype(const DepthPanel& dp);

/// Euclidean distance of every depth series from the prototype.
std::vector<double> distances(const DepthPanel& dp, const Prototype& proto);

/// Medcouple robust skewness in [-1, 1], by exact O(n^2) kernel enumeration:
/// the median of h(x_i, x_j) = ((x_j - m) - (m - x_i)) / (x_j - x_i) over all
/// pairs with x_i <= m <= x_j, where m is the sample median. Pairs tied at
/// the median use the standard -1/0/+1 position kernel. Requires n >= 3;
/// an all-equal sample yields 0.
double medcouple(std::vector<double> values);

struct ThresholdDetails {
    double q1 = 0, q3 = 0, iqr = 0, mc = 0, value = 0;
};

/// Right-tail cutoff Q3 + gamma * exp(3*MC) * IQR with quartiles by linear
/// interpolation between order statistics (position 1 + (n-1)q). A zero IQR
/// degenerates to Q3 so that identical inputs flag nothing. Requires n >= 4.
ThresholdDetails threshold_details(const std::vector<double>& d, double gamma = 0.72);
double threshold(const std::vector<double>& d, double gamma = 0.72);

struct DetectOptions {
    Method method = Method::TDepth;
    int derivative_order = 0;               // 0 = level curves, 1 = first derivatives
    double gamma = 0.72;
    std::optional<std::size_t> basis;       // fixed B-spline basis size
    bool auto_basis = false;                // select the basis size by GCV
};

/// Full outcome of a detection run. `series` retains the depth panel the
/// distances were computed from, for plot output.
struct DetectionReport {
    Method method = Method::TDepth;
    int derivative_order = 0;
    double gamma = 0.72;
    double medcouple_value = 0;
    double q3 = 0;
    double iqr = 0;
    double threshold_value = 0;
    std::vector<std::string> meter_ids;
    std::vector<double> distance;            // per meter
    std::vector<bool> flagged;               // distance > threshold
    std::vector<double> prototype_series;    // length T
    DepthPanel series;
    std::map<std::string, std::string> metadata;

    std::vector<std::string> flagged_ids() const;
};

/// Runs the whole pipeline: optional smoothing / differentiation, per-meter
/// depth series, trimmed-mean prototype, distances, adjusted-boxplot cutoff,
/// flags. derivative_order == 1 smooths first (auto basis unless one is
/// given); derivative_order == 0 uses the curves as-is unless a basis is
/// requested explicitly.
DetectionReport detect(const MeterPanel& panel, const DetectOptions& options = {});

}   // namespace evodepth
