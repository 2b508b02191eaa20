#include "kimura/simulation.hpp"

#include <cmath>

#include "kimura/errors.hpp"
#include "kimura/initial_density.hpp"
#include "kimura/lagrangian.hpp"

namespace kimura {

namespace {
constexpr double absorption_cutoff = 1.0 - 1e-10;
}

LagrangianSimulation::LagrangianSimulation(SolverConfig cfg, Stepper stepper)
    : cfg_(std::move(cfg)), stepper_(stepper) {
    auto [state, masses] = build_initial_state(cfg_);
    state_ = std::move(state);
    masses_ = masses;
}

bool LagrangianSimulation::fully_absorbed() const {
    return masses_.a + masses_.b >= absorption_cutoff;
}

LagrangianSimulation::StepInfo LagrangianSimulation::step() {
    StepInfo info;
    const double tau = cfg_.tau;
    const double alpha = cfg_.alpha_value();

    if (!frozen_) {
        info.energy_before = discrete_free_energy(state_);
        std::vector<double> moved =
            stepper_ == Stepper::ImplicitB
                ? step_implicit_B(state_, tau, cfg_.fp_tol, cfg_.fp_max_iter)
                : step_implicit_A(state_, tau, cfg_.fp_tol, cfg_.fp_max_iter);
        info.energy_after = discrete_free_energy(moved, state_);

        info.report = detect_buffer(moved, cfg_.delta, cfg_.eta_value());
        if (info.report.terminal) {
            // keep the pre-step bulk; from now on only the boundary ODEs run
            frozen_ = true;
        } else {
            info.merged = info.report.new_n_points < state_.n_points();
            state_ = merge_and_update_densities(state_, moved, info.report);
        }
    }
    info.bulk_frozen = frozen_;

    if (!fully_absorbed()) {
        const double rho_l = state_.cell_densities.front();
        const double rho_r = state_.cell_densities.back();
        masses_ = update_boundary_masses(masses_, rho_l, rho_r, tau, alpha);
        correct_boundary_densities(state_, tau, alpha, cfg_.delta);
    }
    t_ += tau;
    return info;
}

LagrangianRunResult run_lagrangian(const SolverConfig& cfg, Stepper stepper,
                                   std::size_t diag_every) {
    cfg.validate();
    LagrangianSimulation sim(cfg, stepper);
    const auto n_steps =
        static_cast<std::size_t>(std::llround(cfg.t_final / cfg.tau));

    LagrangianRunResult out;
    out.records.push_back(sim.record());
    out.ab_trace.push_back({0.0, sim.masses().a, sim.masses().b});
    for (std::size_t n = 1; n <= n_steps; ++n) {
        sim.step();
        out.ab_trace.push_back({sim.time(), sim.masses().a, sim.masses().b});
        if (diag_every > 0 && (n % diag_every == 0 || n == n_steps)) {
            out.records.push_back(sim.record());
        }
    }
    out.state = sim.state();
    out.masses = sim.masses();
    out.t_final = sim.time();
    out.frozen = sim.frozen();
    return out;
}

EulerianRunResult run_eulerian(double delta, double alpha, std::size_t m_cells,
                               double t_final, const std::function<double(double)>& rho0,
                               double record_dt, std::size_t diag_every,
                               double cfl_safety) {
    EulerianRunResult out;
    out.state = make_eulerian_state(delta, m_cells, rho0);

    const double tau_stable = cfl_safety * eulerian_max_tau(out.state);
    const auto substeps = static_cast<std::size_t>(
        std::max(1.0, std::ceil(record_dt / tau_stable)));
    const double tau = record_dt / static_cast<double>(substeps);

    const auto n_records =
        static_cast<std::size_t>(std::llround(t_final / record_dt));

    out.records.push_back(make_record(out.state, 0.0));
    out.ab_trace.push_back({0.0, 0.0, 0.0});
    double t = 0.0;
    for (std::size_t k = 1; k <= n_records; ++k) {
        for (std::size_t s = 0; s < substeps; ++s) {
            eulerian_step(out.state, tau, alpha);
        }
        t = static_cast<double>(k) * record_dt;
        out.ab_trace.push_back({t, out.state.masses.a, out.state.masses.b});
        if (diag_every > 0 && (k % diag_every == 0 || k == n_records)) {
            out.records.push_back(make_record(out.state, t));
        }
    }
    out.t_final = t;
    return out;
}

} // namespace kimura
