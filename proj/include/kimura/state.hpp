#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kimura {

/// Probability mass accumulated in the boundary regions [0, delta) and
/// (1-delta, 1]. Both are nondecreasing along a trajectory.
struct BoundaryMasses {
    double a = 0.0;
    double b = 0.0;
};

/// Lagrangian bulk state: ordered grid points delta = x_0 < ... < x_N = 1-delta,
/// per-cell densities rho_{i+1/2}, and the reference cell widths h_i at the
/// start of the current step. Within the pipeline ref_widths always equals the
/// current position differences; the two only diverge when a candidate
/// position vector is evaluated against a reference state mid-step.
struct ParticleState {
    std::vector<double> positions;      // size N+1
    std::vector<double> cell_densities; // size N
    std::vector<double> ref_widths;     // size N

    std::size_t n_cells() const { return cell_densities.size(); }
    std::size_t n_points() const { return positions.size(); }

    /// Mass carried by cell i, conserved through the transport step.
    double cell_mass(std::size_t i) const {
        return cell_densities[i] * ref_widths[i];
    }
    double bulk_mass() const;
    double cell_midpoint(std::size_t i) const {
        return 0.5 * (positions[i] + positions[i + 1]);
    }
    double cell_width(std::size_t i) const {
        return positions[i + 1] - positions[i];
    }

    /// Throws AdmissibleSetError / DomainError when the ordering, endpoint,
    /// positivity, or width-sum invariants fail.
    void check_invariants(double delta) const;
};

/// true iff delta = y_0 < y_1 < ... < y_N = 1-delta strictly.
bool strictly_ordered(std::span<const double> positions);

/// Piecewise-constant reconstruction of the bulk density together with the
/// boundary masses; the complete discrete solution at one time level.
struct DensityField {
    std::vector<double> breakpoints;
    std::vector<double> values;
    BoundaryMasses masses;

    DensityField(const ParticleState& state, const BoundaryMasses& m);

    /// rho at x inside (delta, 1-delta); zero outside the breakpoint range.
    double operator()(double x) const;
    /// a + integral of the reconstruction + b.
    double total_mass() const;
};

} // namespace kimura
