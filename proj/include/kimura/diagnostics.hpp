#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "kimura/eulerian.hpp"
#include "kimura/state.hpp"

namespace kimura {

/// Conserved-quantity snapshot of one time level.
struct DiagnosticsRecord {
    double t = 0.0;
    double total_mass = 0.0;
    double first_moment = 0.0;
    double bulk_energy = 0.0;  // trapezoid log-weight quadrature
    double whole_energy = 0.0; // boundary pieces in closed form
    std::size_t n_particles = 0;
    double a = 0.0;
    double b = 0.0;
};

/// Dense (t, a, b) sample used for sup-norm trace comparisons.
struct AbSample {
    double t = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// a + sum_i rho_{i+1/2} (x_{i+1} - x_i) + b.
double total_mass(const ParticleState& state, const BoundaryMasses& masses);

/// (delta/2) a + sum_i rho_{i+1/2} mid_i (x_{i+1} - x_i) + (1 - delta/2) b
/// with mid_i = (x_i + x_{i+1})/2; the cell's piecewise-constant value stands
/// in for rho(mid).
double first_moment(const ParticleState& state, const BoundaryMasses& masses,
                    double delta);

/// Entropy of the whole system including the boundary regions, where the
/// density on [0, delta) is a/delta and on (1-delta, 1] is b/delta:
///   int (a/delta) log((a/delta) x(1-x)) + int rho log(rho x(1-x)) + ...
/// Boundary integrals use the closed-form antiderivative of log(x(1-x));
/// the bulk uses the piecewise-constant reconstruction with exact per-cell
/// log-weight integrals. 0 log 0 = 0 throughout.
double whole_domain_energy(const ParticleState& state, const BoundaryMasses& masses,
                           double delta);

DiagnosticsRecord make_record(const ParticleState& state, const BoundaryMasses& masses,
                              double delta, double t);
DiagnosticsRecord make_record(const EulerianState& state, double t);

struct ErrorTriple {
    double rho = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Table-style error norms: max over interior Lagrangian cells of
/// |rho_L - spline(euler)| at the cell midpoints, and sup over the shared
/// time samples of |a - a~| and |b - b~|. Throws on trace length mismatch.
ErrorTriple linf_errors(const ParticleState& lagr, const EulerianState& euler,
                        std::span<const AbSample> lagr_trace,
                        std::span<const AbSample> euler_trace);

/// CSV with header t,mass,M1,E_bulk,E_whole,N,a,b; %.17g formatting so that
/// reruns of the same manifest are byte-identical.
void write_diagnostics_csv(const std::filesystem::path& path,
                           std::span<const DiagnosticsRecord> records);

/// CSV with header x,rho: cell midpoints and densities of the final state.
void write_density_csv(const std::filesystem::path& path, const ParticleState& state);
void write_density_csv(const std::filesystem::path& path, const EulerianState& state);

void write_text_file(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);

} // namespace kimura
