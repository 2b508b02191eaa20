#include "kimura/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "kimura/errors.hpp"
#include "kimura/lagrangian.hpp"
#include "kimura/numerics.hpp"

namespace kimura {

double total_mass(const ParticleState& state, const BoundaryMasses& masses) {
    return masses.a + state.bulk_mass() + masses.b;
}

double first_moment(const ParticleState& state, const BoundaryMasses& masses,
                    double delta) {
    double bulk = 0.0;
    for (std::size_t i = 0; i < state.n_cells(); ++i) {
        bulk += state.cell_densities[i] * state.cell_midpoint(i) * state.cell_width(i);
    }
    return 0.5 * delta * masses.a + bulk + (1.0 - 0.5 * delta) * masses.b;
}

namespace {

double boundary_entropy(double mass, double delta, double log_weight_piece) {
    if (mass <= 0.0) return 0.0; // 0 log 0 convention
    return mass * std::log(mass / delta) + (mass / delta) * log_weight_piece;
}

} // namespace

double whole_domain_energy(const ParticleState& state, const BoundaryMasses& masses,
                           double delta) {
    // both boundary strips carry the same log-weight integral by symmetry
    const double piece = log_weight_integral(0.0, delta);
    double energy = boundary_entropy(masses.a, delta, piece) +
                    boundary_entropy(masses.b, delta, piece);
    for (std::size_t i = 0; i < state.n_cells(); ++i) {
        const double rho = state.cell_densities[i];
        if (rho <= 0.0) continue;
        energy += rho * (std::log(rho) * state.cell_width(i) +
                         log_weight_integral(state.positions[i], state.positions[i + 1]));
    }
    return energy;
}

DiagnosticsRecord make_record(const ParticleState& state, const BoundaryMasses& masses,
                              double delta, double t) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.total_mass = total_mass(state, masses);
    rec.first_moment = first_moment(state, masses, delta);
    rec.bulk_energy = discrete_free_energy(state);
    rec.whole_energy = whole_domain_energy(state, masses, delta);
    rec.n_particles = state.n_points();
    rec.a = masses.a;
    rec.b = masses.b;
    return rec;
}

DiagnosticsRecord make_record(const EulerianState& state, double t) {
    // view the uniform grid as a particle state with unit stretch
    ParticleState view;
    const std::size_t m = state.m_cells();
    view.positions.resize(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        view.positions[j] = state.delta + static_cast<double>(j) * state.h;
    }
    view.positions.back() = 1.0 - state.delta;
    view.cell_densities = state.rho;
    view.ref_widths.assign(m, state.h);
    return make_record(view, state.masses, state.delta, t);
}

ErrorTriple linf_errors(const ParticleState& lagr, const EulerianState& euler,
                        std::span<const AbSample> lagr_trace,
                        std::span<const AbSample> euler_trace) {
    if (lagr_trace.size() != euler_trace.size()) {
        throw Error("a/b trace lengths differ");
    }
    ErrorTriple err;
    const std::size_t n = lagr.n_cells();
    if (n > 2) {
        std::vector<double> mids;
        mids.reserve(n - 2);
        for (std::size_t i = 1; i + 1 < n; ++i) mids.push_back(lagr.cell_midpoint(i));
        const std::vector<double> interp = evaluate_at(euler, mids);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            err.rho = std::max(err.rho,
                               std::abs(lagr.cell_densities[i] - interp[i - 1]));
        }
    }
    for (std::size_t j = 0; j < lagr_trace.size(); ++j) {
        err.a = std::max(err.a, std::abs(lagr_trace[j].a - euler_trace[j].a));
        err.b = std::max(err.b, std::abs(lagr_trace[j].b - euler_trace[j].b));
    }
    return err;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           std::span<const DiagnosticsRecord> records) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "t,mass,M1,E_bulk,E_whole,N,a,b\n";
    for (const auto& r : records) {
        out << format_double(r.t) << ',' << format_double(r.total_mass) << ','
            << format_double(r.first_moment) << ',' << format_double(r.bulk_energy)
            << ',' << format_double(r.whole_energy) << ',' << r.n_particles << ','
            << format_double(r.a) << ',' << format_double(r.b) << '\n';
    }
}

void write_density_csv(const std::filesystem::path& path, const ParticleState& state) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "x,rho\n";
    for (std::size_t i = 0; i < state.n_cells(); ++i) {
        out << format_double(state.cell_midpoint(i)) << ','
            << format_double(state.cell_densities[i]) << '\n';
    }
}

void write_density_csv(const std::filesystem::path& path, const EulerianState& state) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "x,rho\n";
    for (std::size_t j = 0; j < state.m_cells(); ++j) {
        out << format_double(state.center(j)) << ',' << format_double(state.rho[j])
            << '\n';
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << content;
}

} // namespace kimura
