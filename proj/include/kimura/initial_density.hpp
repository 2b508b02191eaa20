#pragma once

#include <functional>
#include <utility>

#include "kimura/config.hpp"
#include "kimura/state.hpp"

namespace kimura {

/// rho_0^1(x) = (2 + 6x + (pi/2) sin(2 pi (x-delta)/(1-2 delta))) / (5(1-2 delta)).
/// Normalized to unit mass on (delta, 1-delta); the sine term integrates to
/// zero over its full period. Throws DomainError outside [delta, 1-delta].
double initial_density_rho1(double x, double delta);

/// rho_0^2(x) = c1 Phi_1(x) + c2 Phi_2(x) + (1 - c1 - c2)/(1 - 2 delta) with
/// Phi_i Gaussians (sigma = 0.1, mu = 0.2 and 0.7) restricted to
/// (delta, 1-delta) and renormalized to unit mass there, so the mixture
/// integrates to one.
double initial_density_rho2(double x, double delta);
double initial_density_rho2(double x, double delta, double c1, double c2);

/// Gaussian pdf restricted to (delta, 1-delta), renormalized to unit mass.
double truncated_gaussian(double x, double mu, double sigma, double delta);

/// The initial density selected by the config, as a callable.
std::function<double(double)> initial_density_function(const SolverConfig& cfg);

/// Equidistant grid x_i = delta + i h, h = (1-2 delta)/N0, with cell densities
/// sampled at the cell midpoints (so cell masses are m_i = h rho_0(X_{i+1/2}))
/// and empty boundary masses.
std::pair<ParticleState, BoundaryMasses> build_initial_state(const SolverConfig& cfg);

} // namespace kimura
