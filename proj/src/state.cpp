#include "kimura/state.hpp"

#include <algorithm>
#include <cmath>

#include "kimura/errors.hpp"

namespace kimura {

double ParticleState::bulk_mass() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n_cells(); ++i) {
        m += cell_densities[i] * (positions[i + 1] - positions[i]);
    }
    return m;
}

bool strictly_ordered(std::span<const double> positions) {
    for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
        if (!(positions[i] < positions[i + 1])) return false;
    }
    return true;
}

void ParticleState::check_invariants(double delta) const {
    if (positions.size() != cell_densities.size() + 1 ||
        ref_widths.size() != cell_densities.size() || cell_densities.empty()) {
        throw AdmissibleSetError("inconsistent state array sizes");
    }
    if (positions.front() != delta || positions.back() != 1.0 - delta) {
        throw DomainError("endpoints must be pinned at delta and 1-delta");
    }
    if (!strictly_ordered(positions)) {
        throw AdmissibleSetError("positions must be strictly increasing");
    }
    double width_sum = 0.0;
    for (double h : ref_widths) {
        if (!(h > 0.0)) throw AdmissibleSetError("reference widths must be positive");
        width_sum += h;
    }
    const double expected = 1.0 - 2.0 * delta;
    if (std::abs(width_sum - expected) > 1e-10 * std::max(1.0, expected)) {
        throw AdmissibleSetError("reference widths must sum to 1-2*delta");
    }
    for (double r : cell_densities) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw AdmissibleSetError("cell densities must be finite and nonnegative");
        }
    }
}

DensityField::DensityField(const ParticleState& state, const BoundaryMasses& m)
    : breakpoints(state.positions), values(state.cell_densities), masses(m) {}

double DensityField::operator()(double x) const {
    if (x < breakpoints.front() || x > breakpoints.back()) return 0.0;
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
    std::size_t i = static_cast<std::size_t>(it - breakpoints.begin());
    if (i > 0) --i;
    if (i >= values.size()) i = values.size() - 1;
    return values[i];
}

double DensityField::total_mass() const {
    double bulk = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        bulk += values[i] * (breakpoints[i + 1] - breakpoints[i]);
    }
    return masses.a + bulk + masses.b;
}

} // namespace kimura
