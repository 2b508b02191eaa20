#pragma once

#include <cstddef>
#include <span>

#include "kimura/state.hpp"

namespace kimura {

/// Result of buffer detection after a transport step. i_c is the first grid
/// point strictly beyond the left buffer, i_f the last one strictly before
/// the right buffer; particles outside [i_c, i_f] are merged into the two
/// boundary cells. `terminal` is set when fewer than two cells would remain
/// strictly between the buffers, the signal to freeze the bulk and continue
/// only the boundary mass ODEs.
struct MergeReport {
    std::size_t i_c = 0;
    std::size_t i_f = 0;
    double removed_left_mass = 0.0;  // mass of cells 1..i_c-1, filled by merge
    double removed_right_mass = 0.0; // mass of cells i_f..N-2, filled by merge
    std::size_t new_n_points = 0;    // i_f - i_c + 3
    bool terminal = false;
};

/// i_c = min{ i : x_i > delta + eta }, i_f = max{ i : x_i < 1 - delta - eta }.
MergeReport detect_buffer(std::span<const double> positions, double delta, double eta);

/// Applies the re-indexing step: interior cells i_c..i_f-1 keep their mass and
/// get densities rescaled by the width ratio; everything between each domain
/// endpoint and the first retained particle collapses into one boundary cell
/// carrying the combined mass as a constant density. Fills the removed-mass
/// fields of `report`. The returned state has ref_widths equal to its own
/// cell widths (ready for the next step). Must not be called with a terminal
/// report.
ParticleState merge_and_update_densities(const ParticleState& ref,
                                         std::span<const double> new_positions,
                                         MergeReport& report);

/// Explicit Euler update of the boundary mass ODEs:
///   a' = alpha rho_l,  b' = alpha rho_r.
BoundaryMasses update_boundary_masses(BoundaryMasses masses, double rho_l, double rho_r,
                                      double tau, double alpha);

/// Drains the mass handed to the boundary ODEs out of the first and last
/// cells: rho -> (1 - tau alpha / width) rho on both boundary cells. Throws
/// StepSizeError when tau alpha reaches a boundary cell width (the factor
/// would go nonpositive). Together with update_boundary_masses this keeps the
/// total a + bulk + b exactly constant.
void correct_boundary_densities(ParticleState& state, double tau, double alpha,
                                double delta);

} // namespace kimura
