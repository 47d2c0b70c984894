#include "evodepth/simulation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace evodepth {

double GaussianRng::next_normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = 1.0 - next_uniform();   // (0, 1], keeps the log finite
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

std::int64_t GaussianRng::next_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("next_int: empty range");
    const double span = static_cast<double>(hi - lo + 1);
    const auto offset = static_cast<std::int64_t>(next_uniform() * span);
    return lo + std::min<std::int64_t>(offset, hi - lo);
}

GpSampler::GpSampler(GpConfig config) : config_(std::move(config)) {
    config_.grid.validate();
    if (!(config_.eta > 0.0) || !(config_.lambda > 0.0))
        throw std::invalid_argument("GpSampler: eta > 0 and lambda > 0 required");
    sqrt_eta_ = std::sqrt(config_.eta);

    const std::size_t p = config_.grid.size();
    Eigen::MatrixXd corr(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::exp(-config_.lambda * std::fabs(config_.grid.points[i] - config_.grid.points[j]));

    // Factor the unit-diagonal correlation matrix so the jitter scale is
    // independent of eta; the curve is rescaled by sqrt(eta) afterwards.
    Eigen::LLT<Eigen::MatrixXd> llt;
    for (jitter_ = 1e-10; jitter_ <= 1e-4; jitter_ *= 10.0) {
        Eigen::MatrixXd shifted = corr;
        shifted.diagonal().array() += jitter_;
        llt.compute(shifted);
        if (llt.info() == Eigen::Success) {
            const Eigen::MatrixXd lower = llt.matrixL();
            chol_.resize(p * p, 0.0);
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j <= i; ++j)
                    chol_[i * p + j] = lower(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            return;
        }
    }
    throw std::runtime_error("GpSampler: covariance factorization failed even with jitter 1e-4");
}

std::vector<double> GpSampler::draw(GaussianRng& rng) const {
    const std::size_t p = config_.grid.size();
    std::vector<double> z(p);
    for (double& v : z) v = rng.next_normal();

    std::vector<double> curve(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += chol_[i * p + j] * z[j];
        curve[i] = sqrt_eta_ * acc;
    }
    return curve;
}

std::vector<double> gp_sample(const GpConfig& config, GaussianRng& rng) {
    return GpSampler(config).draw(rng);
}

std::size_t SimScenario::outlier_count() const {
    return static_cast<std::size_t>(std::lround(static_cast<double>(meters) * outlier_fraction));
}

Grid SimScenario::make_grid() const {
    return Grid::uniform01(points);
}

void SimScenario::validate() const {
    if (meters < 2) throw std::invalid_argument("SimScenario: meters >= 2 required");
    if (days < 2) throw std::invalid_argument("SimScenario: days >= 2 required");
    if (points < 2) throw std::invalid_argument("SimScenario: points >= 2 required");
    if (!(outlier_fraction >= 0.0) || outlier_fraction >= 1.0)
        throw std::invalid_argument("SimScenario: outlier_fraction in [0, 1) required");
    if (!(eta_eps > 0.0) || !(eta_ups > 0.0) || !(eta_ups_outlier > 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("SimScenario: variance and decay parameters must be positive");
    if (model == SimModel::Model1 && days <= rho)
        throw std::invalid_argument("SimScenario: T > rho required for Model 1, got T=" +
                                    std::to_string(days) + ", rho=" + std::to_string(rho));
    if (model == SimModel::Model1 && rho < 1)
        throw std::invalid_argument("SimScenario: rho >= 1 required for Model 1");
}

namespace {

std::vector<double> group_mean(const Grid& grid) {
    std::vector<double> mean(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        mean[k] = std::sin(2.0 * std::numbers::pi * grid.points[k]);
    return mean;
}

std::string meter_name(std::size_t index, std::size_t total) {
    std::size_t width = 1;
    for (std::size_t v = total; v >= 10; v /= 10) ++width;
    std::string digits = std::to_string(index + 1);
    return "m" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

std::vector<std::string> day_labels(std::size_t days) {
    std::vector<std::string> labels(days);
    for (std::size_t t = 0; t < days; ++t) labels[t] = std::to_string(t + 1);
    return labels;
}

}   // namespace

Model1Components draw_model1_components(const SimScenario& scenario) {
    scenario.validate();
    const Grid grid = scenario.make_grid();
    GaussianRng rng(scenario.seed);

    const GpSampler group_sampler({scenario.eta_eps, scenario.lambda, grid});
    const GpSampler meter_sampler({scenario.eta_ups, scenario.lambda, grid});
    const GpSampler outlier_sampler({scenario.eta_ups_outlier, scenario.lambda, grid});

    Model1Components components;
    components.day_effects.reserve(scenario.days);
    for (std::size_t t = 0; t < scenario.days; ++t)
        components.day_effects.push_back(group_sampler.draw(rng));

    const std::size_t k = scenario.outlier_count();
    components.meter_effects.reserve(scenario.meters + k);
    for (std::size_t i = 0; i < scenario.meters; ++i)
        components.meter_effects.push_back(meter_sampler.draw(rng));
    for (std::size_t o = 0; o < k; ++o)
        components.meter_effects.push_back(outlier_sampler.draw(rng));

    components.trend_starts.reserve(k);
    for (std::size_t o = 0; o < k; ++o)
        components.trend_starts.push_back(static_cast<std::size_t>(
            rng.next_int(1, static_cast<std::int64_t>(scenario.days - scenario.rho))));
    return components;
}

LabeledPanel assemble_model1(const SimScenario& scenario, const Model1Components& components) {
    scenario.validate();
    const Grid grid = scenario.make_grid();
    const std::vector<double> mean = group_mean(grid);
    const std::size_t n_typical = scenario.meters;
    const std::size_t n_outlier = scenario.outlier_count();
    const std::size_t total = n_typical + n_outlier;
    const std::size_t days = scenario.days;
    const std::size_t p = scenario.points;

    if (components.day_effects.size() != days ||
        components.meter_effects.size() != total ||
        components.trend_starts.size() != n_outlier)
        throw std::invalid_argument("assemble_model1: component shapes do not match the scenario");

    LabeledPanel out;
    out.panel.grid = grid;
    out.panel.day_index = day_labels(days);
    out.panel.meter_ids.reserve(total);
    out.panel.values.assign(total, {});
    out.outlier_flags.assign(total, false);

    for (std::size_t i = 0; i < total; ++i) {
        out.panel.meter_ids.push_back(meter_name(i, total));
        auto& meter = out.panel.values[i];
        meter.assign(days, std::vector<double>(p));
        for (std::size_t t = 0; t < days; ++t)
            for (std::size_t x = 0; x < p; ++x)
                meter[t][x] = mean[x] + components.day_effects[t][x] + components.meter_effects[i][x];
    }

    for (std::size_t o = 0; o < n_outlier; ++o) {
        const std::size_t i = n_typical + o;
        out.outlier_flags[i] = true;
        const std::size_t t_a = components.trend_starts[o];    // 1-based day
        const std::size_t t_b = t_a + scenario.rho;
        auto& meter = out.panel.values[i];
        const std::vector<double> start = meter[t_a - 1];
        const std::vector<double> stop = meter[t_b - 1];
        for (std::size_t t = t_a; t <= t_b; ++t) {
            const double w_start = static_cast<double>(t_b - t) / static_cast<double>(scenario.rho);
            const double w_stop = static_cast<double>(t - t_a) / static_cast<double>(scenario.rho);
            for (std::size_t x = 0; x < p; ++x)
                meter[t - 1][x] = w_start * start[x] + w_stop * stop[x];
        }
    }
    return out;
}

Model2Components draw_model2_components(const SimScenario& scenario) {
    scenario.validate();
    const Grid grid = scenario.make_grid();
    GaussianRng rng(scenario.seed);

    const GpSampler group_sampler({scenario.eta_eps, scenario.lambda, grid});
    const GpSampler meter_sampler({scenario.eta_ups, scenario.lambda, grid});
    const GpSampler outlier_sampler({scenario.eta_ups_outlier, scenario.lambda, grid});

    Model2Components components;
    components.eps_first = group_sampler.draw(rng);
    components.eps_last = group_sampler.draw(rng);

    const std::size_t k = scenario.outlier_count();
    components.meter_effects.reserve(scenario.meters + k);
    for (std::size_t i = 0; i < scenario.meters; ++i)
        components.meter_effects.push_back(meter_sampler.draw(rng));
    for (std::size_t o = 0; o < k; ++o)
        components.meter_effects.push_back(outlier_sampler.draw(rng));
    return components;
}

LabeledPanel assemble_model2(const SimScenario& scenario, const Model2Components& components) {
    scenario.validate();
    const Grid grid = scenario.make_grid();
    const std::vector<double> mean = group_mean(grid);
    const std::size_t n_typical = scenario.meters;
    const std::size_t n_outlier = scenario.outlier_count();
    const std::size_t total = n_typical + n_outlier;
    const std::size_t days = scenario.days;
    const std::size_t p = scenario.points;

    if (components.eps_first.size() != p || components.eps_last.size() != p ||
        components.meter_effects.size() != total)
        throw std::invalid_argument("assemble_model2: component shapes do not match the scenario");

    LabeledPanel out;
    out.panel.grid = grid;
    out.panel.day_index = day_labels(days);
    out.panel.meter_ids.reserve(total);
    out.panel.values.assign(total, {});
    out.outlier_flags.assign(total, false);

    for (std::size_t i = 0; i < total; ++i) {
        out.panel.meter_ids.push_back(meter_name(i, total));
        const bool outlier = i >= n_typical;
        out.outlier_flags[i] = outlier;
        auto& meter = out.panel.values[i];
        meter.assign(days, std::vector<double>(p));
        for (std::size_t t = 1; t <= days; ++t) {
            double w_first = static_cast<double>(days - t) / static_cast<double>(days - 1);
            double w_last = static_cast<double>(t - 1) / static_cast<double>(days - 1);
            if (outlier) std::swap(w_first, w_last);
            for (std::size_t x = 0; x < p; ++x)
                meter[t - 1][x] = mean[x] + w_first * components.eps_first[x] +
                                  w_last * components.eps_last[x] +
                                  components.meter_effects[i][x];
        }
    }
    return out;
}

LabeledPanel generate_model1(const SimScenario& scenario) {
    if (scenario.model != SimModel::Model1)
        throw std::invalid_argument("generate_model1: scenario.model must be Model1");
    return assemble_model1(scenario, draw_model1_components(scenario));
}

LabeledPanel generate_model2(const SimScenario& scenario) {
    if (scenario.model != SimModel::Model2)
        throw std::invalid_argument("generate_model2: scenario.model must be Model2");
    return assemble_model2(scenario, draw_model2_components(scenario));
}

LabeledPanel generate(const SimScenario& scenario) {
    return scenario.model == SimModel::Model1 ? generate_model1(scenario)
                                              : generate_model2(scenario);
}

}   // namespace evodepth
