#include "evodepth/depth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace evodepth {

namespace detail {

namespace {

void require_sample(const std::vector<std::vector<double>>& rows) {
    if (rows.size() < 2)
        throw std::invalid_argument("depth: n >= 2 curves required, got " +
                                    std::to_string(rows.size()));
    const std::size_t p = rows.front().size();
    if (p == 0) throw std::invalid_argument("depth: empty curves");
    for (const auto& r : rows)
        if (r.size() != p) throw std::invalid_argument("depth: ragged curve sample");
}

}   // namespace

std::vector<double> mbd_values(const std::vector<std::vector<double>>& rows) {
    require_sample(rows);
    const std::size_t n = rows.size();
    const std::size_t p = rows.front().size();
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);

    // A band excludes a curve at a grid point only when both of its defining
    // curves are strictly above or strictly below it there, so the per-point
    // pair count is C(n,2) - C(above,2) - C(below,2).
    std::vector<double> out(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        const std::vector<double>& y = rows[c];
        double acc = 0.0;
        for (std::size_t k = 0; k < p; ++k) {
            double above = 0.0, below = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (rows[i][k] > y[k]) above += 1.0;
                else if (rows[i][k] < y[k]) below += 1.0;
            }
            const double out_pairs = 0.5 * (above * (above - 1.0) + below * (below - 1.0));
            acc += (pairs - out_pairs) / pairs;
        }
        out[c] = acc / static_cast<double>(p);
    }
    return out;
}

std::vector<double> mei_values(const std::vector<std::vector<double>>& rows) {
    require_sample(rows);
    const std::size_t n = rows.size();
    const std::size_t p = rows.front().size();

    std::vector<double> out(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        const std::vector<double>& y = rows[c];
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < p; ++k)
                if (y[k] <= rows[i][k]) ++hits;
        out[c] = static_cast<double>(hits) / (static_cast<double>(n) * static_cast<double>(p));
    }
    return out;
}

std::vector<std::size_t> depth_order(const std::vector<std::vector<double>>& rows) {
    const std::vector<double> depth = mbd_values(rows);
    const std::vector<double> epi = mei_values(rows);

    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (depth[a] != depth[b]) return depth[a] > depth[b];
        const double da = std::fabs(epi[a] - 0.5);
        const double db = std::fabs(epi[b] - 0.5);
        if (da != db) return da < db;
        return a < b;
    });
    return order;
}

std::vector<double> scaled_mbd_values(const std::vector<std::vector<double>>& rows) {
    const std::vector<double> depth = mbd_values(rows);
    const std::vector<double> epi = mei_values(rows);
    const std::size_t median = depth_order(rows).front();

    std::vector<double> out(rows.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double diff = epi[median] - epi[i];
        const double sign = (diff > 0.0) - (diff < 0.0);
        out[i] = sign * (depth[median] - depth[i]);
    }
    return out;
}

}   // namespace detail

DepthValues mbd(const CurveSample& sample) {
    sample.validate();
    return {DepthKind::Mbd, detail::mbd_values(sample.values)};
}

DepthValues mei(const CurveSample& sample) {
    sample.validate();
    return {DepthKind::Mei, detail::mei_values(sample.values)};
}

std::size_t functional_median(const CurveSample& sample) {
    sample.validate();
    return detail::depth_order(sample.values).front();
}

DepthValues scaled_mbd(const CurveSample& sample) {
    sample.validate();
    return {DepthKind::ScaledMbd, detail::scaled_mbd_values(sample.values)};
}

std::vector<std::size_t> rank_by_depth(const CurveSample& sample) {
    sample.validate();
    return detail::depth_order(sample.values);
}

}   // namespace evodepth
