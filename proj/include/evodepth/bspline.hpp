#pragma once

#include "evodepth/panel.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace evodepth {

/// Least-squares cubic B-spline representation of a curve sample.
struct SplineFit {
    std::vector<double> knots;                    // clamped, size K + 4
    std::vector<std::vector<double>> coefficients;   // n curves x K
    Grid grid;                                    // source grid
    std::vector<std::string> labels;              // carried from the sample
    std::vector<double> mse;                      // per-curve residual MSE

    std::size_t num_basis() const { return coefficients.empty() ? 0 : coefficients.front().size(); }
};

/// Projects every curve onto the K-dimensional cubic B-spline space over
/// uniformly spaced interior knots (clamped ends). Requires 4 <= K <= p and
/// a full-rank basis on the grid.
SplineFit fit_bsplines(const CurveSample& sample, std::size_t num_basis);

/// Picks the basis size in `k_grid` minimizing the GCV score
/// p * RSS / (p - K)^2 averaged over curves; ties go to the smallest K.
std::size_t select_num_basis(const CurveSample& sample, const std::vector<std::size_t>& k_grid);

/// Fitted values of every curve on the source grid.
CurveSample fitted_values(const SplineFit& fit);

/// Analytic first derivative of the spline expansion on the source grid,
/// via coefficient differencing over the knot spans. Only order 1 is
/// supported.
CurveSample derivative(const SplineFit& fit, int order = 1);

/// Smooths (or differentiates) every meter of a panel with one shared basis
/// size: the given one, or the GCV choice over 4..min(p, 40) pooled across
/// all meters when absent. Reports the size used through `chosen`.
MeterPanel smooth_panel(const MeterPanel& panel, std::optional<std::size_t> num_basis,
                        int derivative_order, std::size_t* chosen = nullptr);

}   // namespace evodepth
