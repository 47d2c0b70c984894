#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace evodepth {

/// Ordered abscissae shared by a set of curves (fraction of day, minutes, ...).
struct Grid {
    std::vector<double> points;

    std::size_t size() const { return points.size(); }

    /// p equally spaced points covering [0, 1], endpoints included.
    static Grid uniform01(std::size_t p);

    /// Throws std::invalid_argument unless points are finite, strictly
    /// increasing and at least two.
    void validate() const;

    bool operator==(const Grid&) const = default;
};

/// A set of curves observed on a common grid, one row per curve.
struct CurveSample {
    Grid grid;
    std::vector<std::string> labels;           // one identifier per curve
    std::vector<std::vector<double>> values;   // n rows x p columns

    std::size_t n_curves() const { return values.size(); }
    std::size_t n_points() const { return grid.size(); }

    void validate() const;
};

/// One meter's raw record: readings at uniformly spaced instants.
struct LongRecord {
    std::string meter_id;
    std::vector<std::int64_t> timestamps;   // strictly increasing
    std::vector<double> readings;

    std::size_t size() const { return readings.size(); }
    void validate() const;
};

/// Rectangular panel of N meters, each with the same T days on the same grid.
struct MeterPanel {
    std::vector<std::string> meter_ids;   // N
    std::vector<std::string> day_index;   // T
    Grid grid;                            // p points
    std::vector<std::vector<std::vector<double>>> values;   // N x T x p

    std::size_t n_meters() const { return meter_ids.size(); }
    std::size_t n_days() const { return day_index.size(); }
    std::size_t n_points() const { return grid.size(); }

    /// The T daily curves of meter i as a standalone sample.
    CurveSample meter_sample(std::size_t meter) const;

    /// Throws unless the panel is rectangular with N >= 2, T >= 2 and all
    /// values finite.
    void validate() const;
};

/// Slices a long record into T = len/p daily curves of p points each, in
/// recording order. The grid is the fraction-of-day x_k = k/p. Rejects
/// records whose length is not an exact multiple of p, reporting the
/// remainder; partial boundary days are never guessed at.
CurveSample fold_to_daily(const LongRecord& record, std::size_t p);

/// Stacks per-meter samples into a rectangular panel, preserving meter and
/// day order. Rejects ragged inputs naming the first offending meter.
MeterPanel assemble_panel(const std::vector<std::pair<std::string, CurveSample>>& samples);

/// Restricts the panel to the largest contiguous grid window on which the
/// pooled median of |value| (over all meters and days) exceeds `threshold`.
/// Ties go to the leftmost window. Rejects panels where no point qualifies.
MeterPanel trim_nonzero_window(const MeterPanel& panel, double threshold = 0.0);

}   // namespace evodepth
