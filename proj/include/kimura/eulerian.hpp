#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kimura/state.hpp"

namespace kimura {

/// Fixed-grid reference solver state: M uniform cells on (delta, 1-delta)
/// with cell-centered densities, plus the boundary masses.
struct EulerianState {
    double delta = 0.0;
    double h = 0.0;
    std::vector<double> rho;
    BoundaryMasses masses;

    std::size_t m_cells() const { return rho.size(); }
    double center(std::size_t j) const {
        return delta + (static_cast<double>(j) + 0.5) * h;
    }
    double bulk_mass() const;
    double total_mass() const { return masses.a + bulk_mass() + masses.b; }
};

/// Initializes M cells with rho0 sampled at cell centers and a = b = 0.
EulerianState make_eulerian_state(double delta, std::size_t m_cells,
                                  const std::function<double(double)>& rho0);

/// Stability limit of the explicit step: h^2 / (2 max_j x_j(1-x_j)).
double eulerian_max_tau(const EulerianState& state);

/// One conservative finite-volume step of
///   d rho/dt = d/dx G,   G = d/dx(x(1-x) rho),
/// with Robin boundary fluxes G = alpha rho at x = delta and G = -alpha rho
/// at x = 1-delta, feeding a and b so that a + bulk + b telescopes exactly.
/// rho(delta, t) is taken as the first cell value (first-order in h).
/// Throws CflError when tau exceeds the stability limit.
void eulerian_step(EulerianState& state, double tau, double alpha);

/// Cubic-spline interpolation (not-a-knot, mirroring SciPy's default) of the
/// cell-centered densities, clamped to >= 0. Points must lie in
/// [delta, 1-delta]; anything outside throws InterpolationError. Points
/// between the domain edge and the first/last cell center are evaluated with
/// the adjacent end polynomial.
std::vector<double> evaluate_at(const EulerianState& state,
                                std::span<const double> points);

} // namespace kimura
