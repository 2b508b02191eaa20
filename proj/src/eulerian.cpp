#include "kimura/eulerian.hpp"

#include <algorithm>
#include <cmath>

#include "kimura/errors.hpp"
#include "kimura/numerics.hpp"

namespace kimura {

double EulerianState::bulk_mass() const {
    double m = 0.0;
    for (double r : rho) m += r;
    return m * h;
}

EulerianState make_eulerian_state(double delta, std::size_t m_cells,
                                  const std::function<double(double)>& rho0) {
    if (m_cells < 4) throw ConfigError("eulerian grid needs at least 4 cells");
    EulerianState st;
    st.delta = delta;
    st.h = (1.0 - 2.0 * delta) / static_cast<double>(m_cells);
    st.rho.resize(m_cells);
    for (std::size_t j = 0; j < m_cells; ++j) st.rho[j] = rho0(st.center(j));
    return st;
}

double eulerian_max_tau(const EulerianState& state) {
    // x(1-x) is maximized at the cell center nearest 1/2.
    const double jr = (0.5 - state.delta) / state.h - 0.5;
    const auto jc = static_cast<std::size_t>(
        std::clamp(std::llround(jr), 0LL,
                   static_cast<long long>(state.m_cells()) - 1));
    double cmax = 0.0;
    for (std::size_t j = (jc > 0 ? jc - 1 : 0);
         j <= std::min(jc + 1, state.m_cells() - 1); ++j) {
        const double c = state.center(j);
        cmax = std::max(cmax, c * (1.0 - c));
    }
    return state.h * state.h / (2.0 * cmax);
}

void eulerian_step(EulerianState& state, double tau, double alpha) {
    if (tau > eulerian_max_tau(state)) {
        throw CflError("eulerian step exceeds the stability limit");
    }
    const std::size_t m = state.m_cells();
    const double h = state.h;

    thread_local std::vector<double> g;
    g.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double c = state.center(j);
        g[j] = c * (1.0 - c) * state.rho[j];
    }

    // face fluxes G = d/dx(x(1-x) rho); Robin values at the domain faces
    const double da = tau * alpha * state.rho.front();
    const double db = tau * alpha * state.rho.back();
    const double r = tau / (h * h);

    const double g_first = g[0];
    double g_prev = g_first;
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double g_curr = g[j];
        const double g_next = g[j + 1];
        state.rho[j] += r * (g_next - g_curr) - r * (g_curr - g_prev);
        g_prev = g_curr;
    }
    state.rho[m - 1] += -r * (g[m - 1] - g_prev);

    // boundary faces: G(delta) = alpha rho_l, G(1-delta) = -alpha rho_r
    state.rho[0] -= da / h;
    state.rho[m - 1] -= db / h;
    state.masses.a += da;
    state.masses.b += db;
}

std::vector<double> evaluate_at(const EulerianState& state,
                                std::span<const double> points) {
    for (double p : points) {
        if (p < state.delta || p > 1.0 - state.delta) {
            throw InterpolationError("evaluation point outside [delta, 1-delta]");
        }
    }
    std::vector<double> centers(state.m_cells());
    for (std::size_t j = 0; j < centers.size(); ++j) centers[j] = state.center(j);
    const CubicSpline spline(centers, state.rho);

    std::vector<double> out(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        out[k] = std::max(0.0, spline(points[k]));
    }
    return out;
}

} // namespace kimura
