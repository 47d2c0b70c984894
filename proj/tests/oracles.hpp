#pragma once

// Test-only reference implementations, kept deliberately naive and
// independent of the production kernels they check.

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

namespace oracles {

// Band depth by direct triple loop over all unordered pairs.
inline std::vector<double> mbd_brute(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    const std::size_t p = rows.front().size();
    std::vector<double> out(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        double total = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                ++pairs;
                std::size_t inside = 0;
                for (std::size_t k = 0; k < p; ++k) {
                    const double lo = std::min(rows[i][k], rows[j][k]);
                    const double hi = std::max(rows[i][k], rows[j][k]);
                    if (lo <= rows[c][k] && rows[c][k] <= hi) ++inside;
                }
                total += static_cast<double>(inside) / static_cast<double>(p);
            }
        }
        out[c] = total / static_cast<double>(pairs);
    }
    return out;
}

// Epigraph index by direct double loop.
inline std::vector<double> mei_brute(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    const std::size_t p = rows.front().size();
    std::vector<double> out(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t above = 0;
            for (std::size_t k = 0; k < p; ++k)
                if (rows[c][k] <= rows[i][k]) ++above;
            total += static_cast<double>(above) / static_cast<double>(p);
        }
        out[c] = total / static_cast<double>(n);
    }
    return out;
}

inline std::vector<std::vector<double>> random_sample(std::mt19937& rng, std::size_t n,
                                                      std::size_t p) {
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    std::vector<std::vector<double>> rows;
    rows.resize(n, std::vector<double>(p));
    for (auto& row : rows)
        for (double& v : row) v = unif(rng);
    return rows;
}

}   // namespace oracles
