#include "evodepth/panel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evodepth {

Grid Grid::uniform01(std::size_t p) {
    if (p < 2) throw std::invalid_argument("Grid::uniform01: p >= 2 required");
    Grid g;
    g.points.resize(p);
    for (std::size_t k = 0; k < p; ++k)
        g.points[k] = static_cast<double>(k) / static_cast<double>(p - 1);
    return g;
}

void Grid::validate() const {
    if (points.size() < 2)
        throw std::invalid_argument("Grid: at least 2 points required, got " +
                                    std::to_string(points.size()));
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (!std::isfinite(points[k]))
            throw std::invalid_argument("Grid: non-finite abscissa at index " + std::to_string(k));
        if (k > 0 && !(points[k - 1] < points[k]))
            throw std::invalid_argument("Grid: points must be strictly increasing (index " +
                                        std::to_string(k) + ")");
    }
}

void CurveSample::validate() const {
    grid.validate();
    if (labels.size() != values.size())
        throw std::invalid_argument("CurveSample: " + std::to_string(labels.size()) +
                                    " labels for " + std::to_string(values.size()) + " curves");
    const std::size_t p = grid.size();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != p)
            throw std::invalid_argument("CurveSample: curve '" + labels[i] + "' has " +
                                        std::to_string(values[i].size()) + " values, expected " +
                                        std::to_string(p));
        for (double v : values[i])
            if (!std::isfinite(v))
                throw std::invalid_argument("CurveSample: non-finite value in curve '" +
                                            labels[i] + "'");
    }
}

void LongRecord::validate() const {
    if (timestamps.size() != readings.size())
        throw std::invalid_argument("LongRecord '" + meter_id + "': " +
                                    std::to_string(timestamps.size()) + " timestamps for " +
                                    std::to_string(readings.size()) + " readings");
    for (std::size_t k = 1; k < timestamps.size(); ++k)
        if (timestamps[k] <= timestamps[k - 1])
            throw std::invalid_argument("LongRecord '" + meter_id +
                                        "': timestamps not strictly increasing at index " +
                                        std::to_string(k));
    for (double v : readings)
        if (!std::isfinite(v))
            throw std::invalid_argument("LongRecord '" + meter_id + "': non-finite reading");
}

CurveSample MeterPanel::meter_sample(std::size_t meter) const {
    CurveSample s;
    s.grid = grid;
    s.labels = day_index;
    s.values = values.at(meter);
    return s;
}

void MeterPanel::validate() const {
    grid.validate();
    if (meter_ids.size() < 2)
        throw std::invalid_argument("MeterPanel: N >= 2 required, got " +
                                    std::to_string(meter_ids.size()));
    if (day_index.size() < 2)
        throw std::invalid_argument("MeterPanel: T >= 2 required, got " +
                                    std::to_string(day_index.size()));
    if (values.size() != meter_ids.size())
        throw std::invalid_argument("MeterPanel: value rows do not match meter count");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i].size() != day_index.size())
            throw std::invalid_argument("MeterPanel: meter '" + meter_ids[i] + "' has " +
                                        std::to_string(values[i].size()) + " days, expected " +
                                        std::to_string(day_index.size()));
        for (const auto& day : values[i]) {
            if (day.size() != grid.size())
                throw std::invalid_argument("MeterPanel: meter '" + meter_ids[i] +
                                            "' has a day with " + std::to_string(day.size()) +
                                            " points, expected " + std::to_string(grid.size()));
            for (double v : day)
                if (!std::isfinite(v))
                    throw std::invalid_argument("MeterPanel: non-finite value in meter '" +
                                                meter_ids[i] + "'");
        }
    }
}

CurveSample fold_to_daily(const LongRecord& record, std::size_t p) {
    record.validate();
    if (p < 2) throw std::invalid_argument("fold_to_daily: p >= 2 required");
    const std::size_t len = record.size();
    if (len == 0 || len % p != 0)
        throw std::invalid_argument("fold_to_daily: record '" + record.meter_id + "' length " +
                                    std::to_string(len) + " is not a multiple of p=" +
                                    std::to_string(p) + " (remainder " +
                                    std::to_string(len % p) + ")");

    // Instants within each day must be equally spaced; day boundaries may jump.
    if (!record.timestamps.empty() && p >= 2) {
        for (std::size_t day = 0; day < len / p; ++day) {
            const std::int64_t step = record.timestamps[day * p + 1] - record.timestamps[day * p];
            for (std::size_t k = 2; k < p; ++k) {
                const std::size_t u = day * p + k;
                if (record.timestamps[u] - record.timestamps[u - 1] != step)
                    throw std::invalid_argument(
                        "fold_to_daily: record '" + record.meter_id +
                        "' is not uniformly sampled within day " + std::to_string(day + 1));
            }
        }
    }

    CurveSample out;
    out.grid.points.resize(p);
    for (std::size_t k = 0; k < p; ++k)
        out.grid.points[k] = static_cast<double>(k) / static_cast<double>(p);

    const std::size_t days = len / p;
    out.values.resize(days);
    out.labels.resize(days);
    for (std::size_t t = 0; t < days; ++t) {
        out.values[t].assign(record.readings.begin() + static_cast<std::ptrdiff_t>(t * p),
                             record.readings.begin() + static_cast<std::ptrdiff_t>((t + 1) * p));
        out.labels[t] = std::to_string(t + 1);
    }
    return out;
}

MeterPanel assemble_panel(const std::vector<std::pair<std::string, CurveSample>>& samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("assemble_panel: N >= 2 meters required, got " +
                                    std::to_string(samples.size()));

    const CurveSample& first = samples.front().second;
    first.validate();
    if (first.n_curves() < 2)
        throw std::invalid_argument("assemble_panel: T >= 2 days required, meter '" +
                                    samples.front().first + "' has " +
                                    std::to_string(first.n_curves()));

    MeterPanel panel;
    panel.grid = first.grid;
    panel.day_index = first.labels;
    panel.meter_ids.reserve(samples.size());
    panel.values.reserve(samples.size());

    for (const auto& [id, sample] : samples) {
        sample.validate();
        if (sample.grid.points != panel.grid.points)
            throw std::invalid_argument("assemble_panel: meter '" + id +
                                        "' observed on a different grid");
        if (sample.n_curves() != panel.day_index.size())
            throw std::invalid_argument("assemble_panel: meter '" + id + "' has " +
                                        std::to_string(sample.n_curves()) + " days, expected " +
                                        std::to_string(panel.day_index.size()));
        panel.meter_ids.push_back(id);
        panel.values.push_back(sample.values);
    }
    return panel;
}

namespace {

double median_of(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}   // namespace

MeterPanel trim_nonzero_window(const MeterPanel& panel, double threshold) {
    panel.validate();
    if (threshold < 0) throw std::invalid_argument("trim_nonzero_window: threshold >= 0 required");

    const std::size_t p = panel.n_points();
    std::vector<bool> active(p, false);
    std::vector<double> pooled;
    pooled.reserve(panel.n_meters() * panel.n_days());
    for (std::size_t k = 0; k < p; ++k) {
        pooled.clear();
        for (const auto& meter : panel.values)
            for (const auto& day : meter)
                pooled.push_back(std::fabs(day[k]));
        active[k] = median_of(pooled) > threshold;
    }

    // Longest contiguous run of active points; leftmost wins ties.
    std::size_t best_start = 0, best_len = 0, run_start = 0, run_len = 0;
    for (std::size_t k = 0; k < p; ++k) {
        if (active[k]) {
            if (run_len == 0) run_start = k;
            ++run_len;
            if (run_len > best_len) {
                best_len = run_len;
                best_start = run_start;
            }
        } else {
            run_len = 0;
        }
    }
    if (best_len == 0)
        throw std::invalid_argument("trim_nonzero_window: no grid point has pooled median |value| > " +
                                    std::to_string(threshold));
    if (best_len < 2)
        throw std::invalid_argument("trim_nonzero_window: qualifying window has fewer than 2 points");

    MeterPanel out;
    out.meter_ids = panel.meter_ids;
    out.day_index = panel.day_index;
    out.grid.points.assign(panel.grid.points.begin() + static_cast<std::ptrdiff_t>(best_start),
                           panel.grid.points.begin() + static_cast<std::ptrdiff_t>(best_start + best_len));
    out.values.resize(panel.n_meters());
    for (std::size_t i = 0; i < panel.n_meters(); ++i) {
        out.values[i].resize(panel.n_days());
        for (std::size_t t = 0; t < panel.n_days(); ++t)
            out.values[i][t].assign(
                panel.values[i][t].begin() + static_cast<std::ptrdiff_t>(best_start),
                panel.values[i][t].begin() + static_cast<std::ptrdiff_t>(best_start + best_len));
    }
    return out;
}

}   // namespace evodepth
