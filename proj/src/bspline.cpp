#include "evodepth/bspline.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace evodepth {

namespace {

constexpr std::size_t kDegree = 3;

// Clamped knot vector: multiplicity-4 endpoints, K-4 uniform interior knots.
std::vector<double> make_knots(double a, double b, std::size_t num_basis) {
    std::vector<double> knots(num_basis + kDegree + 1);
    const double step = (b - a) / static_cast<double>(num_basis - kDegree);
    for (std::size_t j = 0; j <= kDegree; ++j) knots[j] = a;
    for (std::size_t j = 1; j + kDegree < num_basis; ++j)
        knots[kDegree + j] = a + static_cast<double>(j) * step;
    for (std::size_t j = num_basis; j < knots.size(); ++j) knots[j] = b;
    return knots;
}

// Nonzero basis functions at x for the given degree (Cox-de Boor, NURBS
// book A2.2): out[r] = B_{span-degree+r}(x).
void basis_funs(const std::vector<double>& knots, std::size_t span, double x,
                std::size_t degree, double* out) {
    std::array<double, kDegree + 1> left{}, right{};
    out[0] = 1.0;
    for (std::size_t j = 1; j <= degree; ++j) {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        double saved = 0.0;
        for (std::size_t r = 0; r < j; ++r) {
            const double tmp = out[r] / (right[r + 1] + left[j - r]);
            out[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        out[j] = saved;
    }
}

Eigen::MatrixXd design_matrix(const std::vector<double>& knots, std::size_t num_basis,
                              const std::vector<double>& xs, std::size_t degree) {
    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(xs.size()),
                                                   static_cast<Eigen::Index>(num_basis));
    std::vector<double> row(degree + 1);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        // For degree < kDegree the span search still works on the reduced
        // knot vector because num_basis is passed accordingly.
        std::size_t span;
        if (xs[i] >= knots[num_basis]) span = num_basis - 1;
        else if (xs[i] <= knots[degree]) span = degree;
        else {
            const auto it = std::upper_bound(knots.begin() + static_cast<std::ptrdiff_t>(degree),
                                             knots.begin() + static_cast<std::ptrdiff_t>(num_basis), xs[i]);
            span = static_cast<std::size_t>(it - knots.begin()) - 1;
        }
        basis_funs(knots, span, xs[i], degree, row.data());
        for (std::size_t r = 0; r <= degree; ++r)
            design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(span - degree + r)) = row[r];
    }
    return design;
}

}   // namespace

SplineFit fit_bsplines(const CurveSample& sample, std::size_t num_basis) {
    sample.validate();
    const std::size_t p = sample.n_points();
    if (num_basis < kDegree + 1 || num_basis > p)
        throw std::invalid_argument("fit_bsplines: 4 <= K <= p required, got K=" +
                                    std::to_string(num_basis) + " with p=" + std::to_string(p));

    SplineFit fit;
    fit.grid = sample.grid;
    fit.labels = sample.labels;
    fit.knots = make_knots(sample.grid.points.front(), sample.grid.points.back(), num_basis);

    const Eigen::MatrixXd design = design_matrix(fit.knots, num_basis, sample.grid.points, kDegree);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (static_cast<std::size_t>(qr.rank()) < num_basis)
        throw std::invalid_argument("fit_bsplines: basis is rank-deficient on this grid (rank " +
                                    std::to_string(qr.rank()) + " < K=" + std::to_string(num_basis) + ")");

    const std::size_t n = sample.n_curves();
    Eigen::MatrixXd rhs(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(n));
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t k = 0; k < p; ++k)
            rhs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = sample.values[c][k];

    const Eigen::MatrixXd coef = qr.solve(rhs);            // K x n
    const Eigen::MatrixXd residual = rhs - design * coef;  // p x n

    fit.coefficients.resize(n, std::vector<double>(num_basis));
    fit.mse.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t j = 0; j < num_basis; ++j)
            fit.coefficients[c][j] = coef(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
        fit.mse[c] = residual.col(static_cast<Eigen::Index>(c)).squaredNorm() / static_cast<double>(p);
    }
    return fit;
}

std::size_t select_num_basis(const CurveSample& sample, const std::vector<std::size_t>& k_grid) {
    if (k_grid.empty()) throw std::invalid_argument("select_num_basis: empty K grid");
    sample.validate();
    const double p = static_cast<double>(sample.n_points());

    std::vector<std::size_t> candidates = k_grid;
    std::sort(candidates.begin(), candidates.end());

    // Strict < keeps the smallest K on ties (candidates scanned ascending).
    double best_score = std::numeric_limits<double>::infinity();
    std::size_t best_k = candidates.front();
    for (std::size_t k : candidates) {
        // The hat matrix of a full-rank LS fit has trace K, so per curve
        // GCV = p * RSS / (p - K)^2; K == p leaves no residual dof.
        if (static_cast<double>(k) >= p) continue;
        const SplineFit fit = fit_bsplines(sample, k);
        double acc = 0.0;
        for (double mse : fit.mse) {
            const double rss = mse * p;
            acc += p * rss / ((p - static_cast<double>(k)) * (p - static_cast<double>(k)));
        }
        const double score = acc / static_cast<double>(fit.mse.size());
        // scores equal up to rounding noise count as ties, kept at smaller K
        if (score < best_score - 1e-10 * (1.0 + score)) {
            best_score = score;
            best_k = k;
        }
    }
    return best_k;
}

CurveSample fitted_values(const SplineFit& fit) {
    const std::size_t num_basis = fit.num_basis();
    const Eigen::MatrixXd design = design_matrix(fit.knots, num_basis, fit.grid.points, kDegree);

    CurveSample out;
    out.grid = fit.grid;
    out.labels = fit.labels;
    out.values.resize(fit.coefficients.size(), std::vector<double>(fit.grid.size()));
    for (std::size_t c = 0; c < fit.coefficients.size(); ++c) {
        Eigen::Map<const Eigen::VectorXd> coef(fit.coefficients[c].data(),
                                               static_cast<Eigen::Index>(num_basis));
        const Eigen::VectorXd y = design * coef;
        for (std::size_t k = 0; k < fit.grid.size(); ++k)
            out.values[c][k] = y(static_cast<Eigen::Index>(k));
    }
    return out;
}

CurveSample derivative(const SplineFit& fit, int order) {
    if (order != 1)
        throw std::invalid_argument("derivative: only order 1 is supported, got " +
                                    std::to_string(order));
    const std::size_t num_basis = fit.num_basis();
    if (num_basis < kDegree + 1) throw std::invalid_argument("derivative: invalid fit");

    // d/dx sum c_j B_{j,3} = sum d_j B_{j,2} on the knot vector with end
    // multiplicities reduced by one: d_j = 3 (c_{j+1} - c_j) / (t_{j+4} - t_{j+1}).
    const std::vector<double> deriv_knots(fit.knots.begin() + 1, fit.knots.end() - 1);
    const std::size_t deriv_basis = num_basis - 1;

    const Eigen::MatrixXd design = design_matrix(deriv_knots, deriv_basis, fit.grid.points, kDegree - 1);

    CurveSample out;
    out.grid = fit.grid;
    out.labels = fit.labels;
    out.values.resize(fit.coefficients.size(), std::vector<double>(fit.grid.size()));
    Eigen::VectorXd dcoef(static_cast<Eigen::Index>(deriv_basis));
    for (std::size_t c = 0; c < fit.coefficients.size(); ++c) {
        const std::vector<double>& coef = fit.coefficients[c];
        for (std::size_t j = 0; j + 1 < num_basis; ++j) {
            const double span = fit.knots[j + kDegree + 1] - fit.knots[j + 1];
            dcoef(static_cast<Eigen::Index>(j)) =
                static_cast<double>(kDegree) * (coef[j + 1] - coef[j]) / span;
        }
        const Eigen::VectorXd y = design * dcoef;
        for (std::size_t k = 0; k < fit.grid.size(); ++k)
            out.values[c][k] = y(static_cast<Eigen::Index>(k));
    }
    return out;
}

MeterPanel smooth_panel(const MeterPanel& panel, std::optional<std::size_t> num_basis,
                        int derivative_order, std::size_t* chosen) {
    panel.validate();
    std::size_t k = 0;
    if (num_basis) {
        k = *num_basis;
    } else {
        // One K for the whole panel: GCV over all meters' curves pooled.
        CurveSample pooled;
        pooled.grid = panel.grid;
        for (std::size_t i = 0; i < panel.n_meters(); ++i)
            for (std::size_t t = 0; t < panel.n_days(); ++t) {
                pooled.labels.push_back(panel.meter_ids[i] + ":" + panel.day_index[t]);
                pooled.values.push_back(panel.values[i][t]);
            }
        std::vector<std::size_t> k_grid;
        for (std::size_t cand = 4; cand <= std::min<std::size_t>(panel.n_points(), 40); ++cand)
            k_grid.push_back(cand);
        k = select_num_basis(pooled, k_grid);
    }
    if (chosen) *chosen = k;

    MeterPanel out;
    out.meter_ids = panel.meter_ids;
    out.day_index = panel.day_index;
    out.grid = panel.grid;
    out.values.resize(panel.n_meters());
    for (std::size_t i = 0; i < panel.n_meters(); ++i) {
        const SplineFit fit = fit_bsplines(panel.meter_sample(i), k);
        const CurveSample s = derivative_order == 1 ? derivative(fit, 1) : fitted_values(fit);
        out.values[i] = s.values;
    }
    return out;
}

}   // namespace evodepth
