#pragma once

#include "evodepth/panel.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace evodepth {

/// Deterministic Gaussian source: mt19937_64 with 53-bit uniforms and a
/// cached-pair Box-Muller transform, so identical seeds give identical
/// draws on every conforming platform.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double next_uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double next_normal();

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi);

    static constexpr const char* kDescription = "mt19937_64/boxmuller53";

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Exponential-kernel Gaussian process on a grid:
/// Cov(x, x') = eta * exp(-lambda * |x - x'|).
struct GpConfig {
    double eta = 1.0;
    double lambda = 1.0;
    Grid grid;
};

/// Draws zero-mean GP curves through a Cholesky factor of the correlation
/// matrix with relative diagonal jitter 1e-10 (escalated tenfold on
/// factorization failure, up to 1e-4).
class GpSampler {
public:
    explicit GpSampler(GpConfig config);

    std::vector<double> draw(GaussianRng& rng) const;

    double jitter() const { return jitter_; }
    const GpConfig& config() const { return config_; }

private:
    GpConfig config_;
    std::vector<double> chol_;   // lower triangle of p x p factor, row-major
    double sqrt_eta_ = 0.0;
    double jitter_ = 0.0;
};

/// One GP curve; builds a sampler per call, so prefer GpSampler in loops.
std::vector<double> gp_sample(const GpConfig& config, GaussianRng& rng);

enum class SimModel { Model1 = 1, Model2 = 2 };

/// Full parameterization of a synthetic grouped-meter panel. `meters`
/// counts typical meters; round(meters * outlier_fraction) outliers are
/// appended beyond them.
struct SimScenario {
    SimModel model = SimModel::Model1;
    std::size_t meters = 100;
    std::size_t days = 50;
    std::size_t points = 50;
    double outlier_fraction = 0.05;
    std::size_t rho = 5;                // trend duration (Model 1)
    double eta_eps = 0.8;               // group-effect variance scale
    double lambda = 0.1;                // decay shared by all effects
    double eta_ups = 1.5;               // meter-effect variance, typical
    double eta_ups_outlier = 0.5;       // meter-effect variance, outliers
    std::uint64_t seed = 0;

    std::size_t outlier_count() const;
    Grid make_grid() const;             // points equally spaced on [0, 1]
    void validate() const;
};

struct LabeledPanel {
    MeterPanel panel;
    std::vector<bool> outlier_flags;    // aligned with panel.meter_ids
};

/// Random ingredients of a Model 1 panel, drawn in a fixed order: day
/// effects, typical meter effects, outlier meter effects, trend starts.
struct Model1Components {
    std::vector<std::vector<double>> day_effects;     // T x p, shared by all meters
    std::vector<std::vector<double>> meter_effects;   // (N + k) x p, outliers last
    std::vector<std::size_t> trend_starts;            // k values in [1, T - rho]
};

/// Random ingredients of a Model 2 panel: the two panel-global trend
/// endpoint curves and per-meter effects.
struct Model2Components {
    std::vector<double> eps_first;                    // p
    std::vector<double> eps_last;                     // p
    std::vector<std::vector<double>> meter_effects;   // (N + k) x p, outliers last
};

Model1Components draw_model1_components(const SimScenario& scenario);
Model2Components draw_model2_components(const SimScenario& scenario);

/// Deterministic assembly from given components. Typical meters follow
/// sin(2*pi*x) plus the shared day effect plus their own meter effect;
/// outliers replace days t in [t_a, t_a + rho] with the linear interpolation
/// between their own day-t_a and day-t_b curves.
LabeledPanel assemble_model1(const SimScenario& scenario, const Model1Components& components);

/// Typical meters carry the shared trend (T-t)/(T-1)*eps1 + (t-1)/(T-1)*epsT;
/// outliers swap the two weights.
LabeledPanel assemble_model2(const SimScenario& scenario, const Model2Components& components);

LabeledPanel generate_model1(const SimScenario& scenario);
LabeledPanel generate_model2(const SimScenario& scenario);

/// Dispatches on scenario.model.
LabeledPanel generate(const SimScenario& scenario);

}   // namespace evodepth
