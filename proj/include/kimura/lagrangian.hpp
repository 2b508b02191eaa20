#pragma once

#include <span>
#include <vector>

#include "kimura/numerics.hpp"
#include "kimura/state.hpp"

namespace kimura {

/// Discrete bulk free energy of the state's own positions:
///   sum_i rho_{i+1/2} [ (log(x_i(1-x_i)) + log(x_{i+1}(1-x_{i+1})))/2
///                       + log(rho_{i+1/2} / ((x_{i+1}-x_i)/h_i)) ] h_i.
/// Zero-mass cells contribute nothing (0 log 0 = 0). Throws
/// AdmissibleSetError when the positions are not strictly ordered.
double discrete_free_energy(const ParticleState& state);

/// Same energy evaluated at candidate positions with the reference cell
/// masses rho_{i+1/2} h_i of `ref`.
double discrete_free_energy(std::span<const double> candidate, const ParticleState& ref);

/// Discrete dissipation functional:
///   (1/2) sum_i (1/2) rho_{i+1/2} [ v_i^2/(x_i(1-x_i))
///                                   + v_{i+1}^2/(x_{i+1}(1-x_{i+1})) ] h_i.
/// velocities must have length N+1 with zero endpoint entries.
double discrete_dissipation(const ParticleState& state, std::span<const double> velocities);

/// Residual of the mobility-rescaled implicit step (variant B), aligned with
/// the position array: out[0] = out[N] = 0 and for 1 <= i <= N-1
///   out[i] = (m_{i-1}+m_i)/2 ((y_i - X_i)/tau + 1 - 2 y_i)
///            - [ m_{i-1}/(y_i - y_{i-1}) - m_i/(y_{i+1} - y_i) ] y_i (1 - y_i)
/// with cell masses m_i = rho_{i+1/2} h_i; zero-mass terms are skipped.
void force_residual_B(std::span<const double> candidate, const ParticleState& ref,
                      double tau, std::span<double> out);
std::vector<double> force_residual_B(std::span<const double> candidate,
                                     const ParticleState& ref, double tau);

/// Objective of the variational implicit step (variant A):
///   J(y) = sum_i (m_{i-1}+m_i)/(2 X_i (1-X_i)) (y_i - X_i)^2 / (2 tau)
///          + discrete_free_energy(y; ref).
double objective_J(std::span<const double> candidate, const ParticleState& ref, double tau);

/// Gradient of J, aligned with the position array (zero at the endpoints).
void objective_J_gradient(std::span<const double> candidate, const ParticleState& ref,
                          double tau, std::span<double> out);
std::vector<double> objective_J_gradient(std::span<const double> candidate,
                                         const ParticleState& ref, double tau);

/// Tridiagonal Hessian of J in the interior unknowns y_1..y_{N-1}.
TridiagonalMatrix objective_J_hessian(std::span<const double> candidate,
                                      const ParticleState& ref, double tau);

/// Largest tau for which J is provably convex on the admissible set:
///   8 (delta(1-delta))^2 / (1 - 2 delta(1-delta)).
double convexity_tau_bound(double delta);

/// One implicit transport step, variant B: solves force_residual_B(y) = 0 by
/// a safeguarded Barzilai-Borwein fixed-point iteration warm-started at the
/// current positions. Returns positions with residual max-norm <= fp_tol.
/// Throws ConvergenceError (carrying the last residual norm) on iteration
/// exhaustion and AdmissibleSetError if the ordering safeguard fails.
std::vector<double> step_implicit_B(const ParticleState& state, double tau,
                                    double fp_tol = 1e-12, int fp_max_iter = 500);

/// One implicit transport step, variant A: minimizes J by monotone BB
/// gradient descent with Armijo backtracking, so the discrete free energy
/// never increases across a successful step. Warns (once per call path) when
/// tau exceeds the convexity bound. Returns positions with gradient max-norm
/// <= fp_tol.
std::vector<double> step_implicit_A(const ParticleState& state, double tau,
                                    double fp_tol = 1e-12, int fp_max_iter = 500);

} // namespace kimura
