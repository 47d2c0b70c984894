#pragma once

#include "evodepth/panel.hpp"

#include <cstddef>
#include <vector>

namespace evodepth {

enum class DepthKind { Mbd, Mei, ScaledMbd };

/// Per-curve depth values aligned with the sample's curve order.
struct DepthValues {
    DepthKind kind;
    std::vector<double> values;
};

/// Modified band depth of every curve with respect to the whole sample:
/// the mean fraction of grid points at which the curve lies inside the band
/// spanned by each unordered pair of sample curves (inclusive bounds, pairs
/// containing the curve itself included). Values lie in (0, 1]; higher is
/// more central. Requires n >= 2.
DepthValues mbd(const CurveSample& sample);

/// Modified epigraph index of every curve: the mean fraction of domain-time
/// that sample curves lie weakly above it (the curve itself included).
/// Values lie in (0, 1]; high MEI means a low-lying curve. Requires n >= 2.
DepthValues mei(const CurveSample& sample);

/// Index of the deepest curve. Ties on MBD are broken by MEI closest to 0.5,
/// then by the earliest curve in sample order.
std::size_t functional_median(const CurveSample& sample);

/// MBD re-centered at the functional median and signed by relative MEI:
/// sgn(MEI(median) - MEI(y)) * (MBD(median) - MBD(y)), with sgn(0) = 0.
/// Curves below the median get negative values, curves above positive ones;
/// the median itself maps to 0. Values lie in [-1, 1].
DepthValues scaled_mbd(const CurveSample& sample);

/// Curve indices sorted by decreasing MBD, ties broken as in
/// functional_median.
std::vector<std::size_t> rank_by_depth(const CurveSample& sample);

namespace detail {

// Kernels on a raw n x p value matrix; shared with the detection stage,
// which ranks depth series without fabricating a CurveSample.
std::vector<double> mbd_values(const std::vector<std::vector<double>>& rows);
std::vector<double> mei_values(const std::vector<std::vector<double>>& rows);
std::vector<std::size_t> depth_order(const std::vector<std::vector<double>>& rows);
std::vector<double> scaled_mbd_values(const std::vector<std::vector<double>>& rows);

}   // namespace detail

}   // namespace evodepth
