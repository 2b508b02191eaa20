#include "kimura/boundary.hpp"

#include <cmath>

#include "kimura/errors.hpp"

namespace kimura {

MergeReport detect_buffer(std::span<const double> positions, double delta, double eta) {
    const std::size_t n_points = positions.size();
    MergeReport report;

    std::size_t i_c = n_points; // min index with x_i > delta + eta
    for (std::size_t i = 0; i < n_points; ++i) {
        if (positions[i] > delta + eta) {
            i_c = i;
            break;
        }
    }
    std::size_t i_f = 0; // max index with x_i < 1 - delta - eta
    bool found_f = false;
    for (std::size_t i = n_points; i-- > 0;) {
        if (positions[i] < 1.0 - delta - eta) {
            i_f = i;
            found_f = true;
            break;
        }
    }
    if (i_c == n_points || !found_f) {
        // buffers cover the whole domain; nothing survives
        report.terminal = true;
        return report;
    }
    report.i_c = i_c;
    report.i_f = i_f;
    // Freeze once fewer than two cells remain strictly between the buffers.
    report.terminal = i_f < i_c || (i_f - i_c) < 2;
    if (!report.terminal) report.new_n_points = i_f - i_c + 3;
    return report;
}

ParticleState merge_and_update_densities(const ParticleState& ref,
                                         std::span<const double> new_positions,
                                         MergeReport& report) {
    if (report.terminal) {
        throw AdmissibleSetError("merge called on a terminal buffer report");
    }
    const std::size_t n = ref.n_cells();
    const std::size_t i_c = report.i_c;
    const std::size_t i_f = report.i_f;
    const double delta = ref.positions.front();
    const double right_end = ref.positions.back();

    double left_mass = ref.cell_mass(0);
    report.removed_left_mass = 0.0;
    for (std::size_t i = 1; i < i_c; ++i) report.removed_left_mass += ref.cell_mass(i);
    left_mass += report.removed_left_mass;

    double right_mass = ref.cell_mass(n - 1);
    report.removed_right_mass = 0.0;
    for (std::size_t i = i_f; i + 1 < n; ++i) report.removed_right_mass += ref.cell_mass(i);
    right_mass += report.removed_right_mass;

    const double left_width = new_positions[i_c] - delta;
    const double right_width = right_end - new_positions[i_f];
    if (!(left_width > 0.0) || !(right_width > 0.0)) {
        throw AdmissibleSetError("merged boundary cell has zero width");
    }

    ParticleState out;
    out.positions.reserve(report.new_n_points);
    out.positions.push_back(delta);
    for (std::size_t i = i_c; i <= i_f; ++i) out.positions.push_back(new_positions[i]);
    out.positions.push_back(right_end);

    out.cell_densities.reserve(report.new_n_points - 1);
    out.cell_densities.push_back(left_mass / left_width);
    for (std::size_t i = i_c; i < i_f; ++i) {
        // mass-preserving rescale: rho^n h^n / new width
        out.cell_densities.push_back(ref.cell_mass(i) /
                                     (new_positions[i + 1] - new_positions[i]));
    }
    out.cell_densities.push_back(right_mass / right_width);

    out.ref_widths.resize(out.cell_densities.size());
    for (std::size_t i = 0; i < out.ref_widths.size(); ++i) {
        out.ref_widths[i] = out.positions[i + 1] - out.positions[i];
    }
    return out;
}

BoundaryMasses update_boundary_masses(BoundaryMasses masses, double rho_l, double rho_r,
                                      double tau, double alpha) {
    masses.a += tau * alpha * rho_l;
    masses.b += tau * alpha * rho_r;
    return masses;
}

void correct_boundary_densities(ParticleState& state, double tau, double alpha,
                                double delta) {
    const std::size_t n = state.n_cells();
    const double w_l = state.positions[1] - delta;
    const double w_r = (1.0 - delta) - state.positions[n - 1];
    const double drain = tau * alpha;
    if (drain >= w_l || drain >= w_r) {
        throw StepSizeError("tau*alpha reached a boundary cell width");
    }
    // Subtract the transferred mass explicitly so that the product tau*alpha*rho
    // matches the one added to a and b bit for bit.
    state.cell_densities[0] -= drain * state.cell_densities[0] / w_l;
    state.cell_densities[n - 1] -= drain * state.cell_densities[n - 1] / w_r;
}

} // namespace kimura
