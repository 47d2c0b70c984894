#include "evodepth/detection.hpp"

#include "evodepth/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evodepth {

std::string to_string(Method method) {
    return method == Method::TDepth ? "TDEPTH" : "STDEPTH";
}

Method parse_method(const std::string& name) {
    std::string lower;
    lower.reserve(name.size());
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "tdepth") return Method::TDepth;
    if (lower == "stdepth") return Method::STDepth;
    throw std::invalid_argument("unknown method '" + name + "' (expected tdepth or stdepth)");
}

DepthPanel depth_series(const MeterPanel& panel, DepthKind kind) {
    panel.validate();
    if (kind != DepthKind::Mbd && kind != DepthKind::ScaledMbd)
        throw std::invalid_argument("depth_series: kind must be Mbd or ScaledMbd");

    DepthPanel dp;
    dp.kind = kind;
    dp.meter_ids = panel.meter_ids;
    dp.day_index = panel.day_index;
    dp.rows.resize(panel.n_meters());
    for (std::size_t i = 0; i < panel.n_meters(); ++i)
        dp.rows[i] = (kind == DepthKind::Mbd) ? detail::mbd_values(panel.values[i])
                                              : detail::scaled_mbd_values(panel.values[i]);
    return dp;
}

Prototype prototype(const DepthPanel& dp) {
    const std::size_t n = dp.n_meters();
    if (n < 2) throw std::invalid_argument("prototype: N >= 2 series required");
    const std::size_t t_len = dp.rows.front().size();

    const std::vector<std::size_t> order = detail::depth_order(dp.rows);
    const std::size_t keep = (n + 1) / 2;   // ceil(N/2)

    Prototype proto;
    proto.trim_count = keep;
    proto.series.assign(t_len, 0.0);
    for (std::size_t r = 0; r < keep; ++r) {
        const std::vector<double>& row = dp.rows[order[r]];
        for (std::size_t t = 0; t < t_len; ++t) proto.series[t] += row[t];
    }
    for (double& v : proto.series) v /= static_cast<double>(keep);
    return proto;
}

std::vector<double> distances(const DepthPanel& dp, const Prototype& proto) {
    std::vector<double> d(dp.n_meters(), 0.0);
    for (std::size_t i = 0; i < dp.n_meters(); ++i) {
        const std::vector<double>& row = dp.rows[i];
        if (row.size() != proto.series.size())
            throw std::invalid_argument("distances: series length mismatch");
        double acc = 0.0;
        for (std::size_t t = 0; t < row.size(); ++t) {
            const double diff = row[t] - proto.series[t];
            acc += diff * diff;
        }
        d[i] = std::sqrt(acc);
    }
    return d;
}

namespace {

double median_sorted(const std::vector<double>& v) {
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Interpolated quantile at 1-based position 1 + (n-1)q over sorted data.
double quantile_sorted(const std::vector<double>& v, double q) {
    const double pos = static_cast<double>(v.size() - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

}   // namespace

double medcouple(std::vector<double> values) {
    const std::size_t n = values.size();
    if (n < 3) throw std::invalid_argument("medcouple: n >= 3 required, got " + std::to_string(n));
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("medcouple: non-finite value");

    std::sort(values.begin(), values.end());
    const double m = median_sorted(values);

    // Sides overlap on observations equal to the median; those need the
    // position kernel because h is 0/0 there.
    std::vector<double> lower, upper;
    for (double v : values) {
        if (v <= m) lower.push_back(v);
        if (v >= m) upper.push_back(v);
    }
    const std::size_t tied = static_cast<std::size_t>(
        std::count(values.begin(), values.end(), m));

    std::vector<double> kernels;
    kernels.reserve(lower.size() * upper.size());
    std::size_t tie_i = 0;
    for (double xi : lower) {
        if (xi == m) ++tie_i;   // 1-based position of xi within the tied block
        std::size_t tie_j = 0;
        for (double xj : upper) {
            if (xj == m) ++tie_j;
            if (xi == m && xj == m) {
                const double pos = static_cast<double>(tie_i + tie_j) - 1.0 -
                                   static_cast<double>(tied);
                kernels.push_back((pos > 0.0) - (pos < 0.0));
            } else {
                kernels.push_back(((xj - m) - (m - xi)) / (xj - xi));
            }
        }
    }
    if (kernels.empty()) return 0.0;
    std::sort(kernels.begin(), kernels.end());
    return median_sorted(kernels);
}

ThresholdDetails threshold_details(const std::vector<double>& d, double gamma) {
    if (d.size() < 4)
        throw std::invalid_argument("threshold: n >= 4 required, got " + std::to_string(d.size()));

    std::vector<double> sorted = d;
    std::sort(sorted.begin(), sorted.end());

    ThresholdDetails details;
    details.q1 = quantile_sorted(sorted, 0.25);
    details.q3 = quantile_sorted(sorted, 0.75);
    details.iqr = details.q3 - details.q1;
    details.mc = medcouple(d);
    details.value = (details.iqr == 0.0)
                        ? details.q3
                        : details.q3 + gamma * std::exp(3.0 * details.mc) * details.iqr;
    return details;
}

double threshold(const std::vector<double>& d, double gamma) {
    return threshold_details(d, gamma).value;
}

std::vector<std::string> DetectionReport::flagged_ids() const {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < flagged.size(); ++i)
        if (flagged[i]) ids.push_back(meter_ids[i]);
    return ids;
}

DetectionReport detect(const MeterPanel& panel, const DetectOptions& options) {
    panel.validate();
    if (options.derivative_order != 0 && options.derivative_order != 1)
        throw std::invalid_argument("detect: derivative_order must be 0 or 1");
    if (panel.n_meters() < 4)
        throw std::invalid_argument("detect: N >= 4 meters required for the cutoff, got " +
                                    std::to_string(panel.n_meters()));

    DetectionReport report;
    report.method = options.method;
    report.derivative_order = options.derivative_order;
    report.gamma = options.gamma;

    const MeterPanel* input = &panel;
    MeterPanel smoothed;
    const bool smooth = options.derivative_order == 1 || options.basis.has_value() ||
                        options.auto_basis;
    if (smooth) {
        std::size_t chosen = 0;
        smoothed = smooth_panel(panel, options.basis, options.derivative_order, &chosen);
        input = &smoothed;
        report.metadata["basis"] = std::to_string(chosen);
    }

    const DepthKind kind =
        options.method == Method::TDepth ? DepthKind::Mbd : DepthKind::ScaledMbd;
    report.series = depth_series(*input, kind);

    const Prototype proto = prototype(report.series);
    report.prototype_series = proto.series;
    report.meter_ids = panel.meter_ids;
    report.distance = distances(report.series, proto);

    const ThresholdDetails details = threshold_details(report.distance, options.gamma);
    report.medcouple_value = details.mc;
    report.q3 = details.q3;
    report.iqr = details.iqr;
    report.threshold_value = details.value;
    if (details.mc < 0.0) report.metadata["medcouple_negative"] = "true";
    report.metadata["prototype_rank_depth"] = "mbd_over_day_axis";
    report.metadata["prototype_trim_count"] = std::to_string(proto.trim_count);

    report.flagged.resize(report.distance.size());
    for (std::size_t i = 0; i < report.distance.size(); ++i)
        report.flagged[i] = report.distance[i] > report.threshold_value;
    return report;
}

}   // namespace evodepth
