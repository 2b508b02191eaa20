#include "kimura/initial_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kimura/errors.hpp"

namespace kimura {

namespace {

void require_in_domain(double x, double delta) {
    if (!(x >= delta) || !(x <= 1.0 - delta)) {
        throw DomainError("coordinate outside [delta, 1-delta]");
    }
}

double gaussian_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

double linear_table_eval(const std::vector<std::pair<double, double>>& table, double x) {
    if (x <= table.front().first) return table.front().second;
    if (x >= table.back().first) return table.back().second;
    auto it = std::upper_bound(table.begin(), table.end(), x,
                               [](double v, const auto& p) { return v < p.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (x - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

} // namespace

double initial_density_rho1(double x, double delta) {
    require_in_domain(x, delta);
    const double span = 1.0 - 2.0 * delta;
    const double pi = std::numbers::pi;
    return (2.0 + 6.0 * x + 0.5 * pi * std::sin(2.0 * pi * (x - delta) / span)) /
           (5.0 * span);
}

double truncated_gaussian(double x, double mu, double sigma, double delta) {
    require_in_domain(x, delta);
    const double mass = gaussian_cdf(1.0 - delta, mu, sigma) - gaussian_cdf(delta, mu, sigma);
    const double z = (x - mu) / sigma;
    const double pdf = std::exp(-0.5 * z * z) /
                       (sigma * std::sqrt(2.0 * std::numbers::pi));
    return pdf / mass;
}

double initial_density_rho2(double x, double delta, double c1, double c2) {
    require_in_domain(x, delta);
    const double background = (1.0 - c1 - c2) / (1.0 - 2.0 * delta);
    double v = background;
    if (c1 != 0.0) v += c1 * truncated_gaussian(x, 0.2, 0.1, delta);
    if (c2 != 0.0) v += c2 * truncated_gaussian(x, 0.7, 0.1, delta);
    return v;
}

double initial_density_rho2(double x, double delta) {
    return initial_density_rho2(x, delta, 0.6, 0.2);
}

std::function<double(double)> initial_density_function(const SolverConfig& cfg) {
    const double delta = cfg.delta;
    switch (cfg.initial_density) {
    case InitialDensityKind::Rho1:
        return [delta](double x) { return initial_density_rho1(x, delta); };
    case InitialDensityKind::Rho2:
        return [delta](double x) { return initial_density_rho2(x, delta); };
    case InitialDensityKind::Custom: {
        auto table = cfg.custom_density;
        std::sort(table.begin(), table.end());
        return [table = std::move(table)](double x) {
            return linear_table_eval(table, x);
        };
    }
    }
    throw ConfigError("unhandled initial density kind");
}

std::pair<ParticleState, BoundaryMasses> build_initial_state(const SolverConfig& cfg) {
    cfg.validate();
    const auto rho0 = initial_density_function(cfg);
    const std::size_t n = cfg.n_particles;
    const double h = cfg.initial_spacing();

    ParticleState state;
    state.positions.resize(n + 1);
    state.cell_densities.resize(n);
    state.ref_widths.assign(n, h);
    for (std::size_t i = 0; i <= n; ++i) {
        state.positions[i] = cfg.delta + static_cast<double>(i) * h;
    }
    state.positions.back() = 1.0 - cfg.delta; // pin exactly
    for (std::size_t i = 0; i < n; ++i) {
        state.cell_densities[i] = rho0(state.cell_midpoint(i));
    }
    state.check_invariants(cfg.delta);
    return {std::move(state), BoundaryMasses{}};
}

} // namespace kimura
