#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kimura/errors.hpp"
#include "kimura/initial_density.hpp"
#include "kimura/lagrangian.hpp"
#include "kimura/simulation.hpp"
#include "oracle_utils.hpp"

using namespace kimura;

namespace {

bool close_mixed(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

ParticleState symmetric_two_cell_state() {
    ParticleState st;
    st.positions = {0.25, 0.5, 0.75};
    st.cell_densities = {2.0, 2.0};
    st.ref_widths = {0.25, 0.25};
    return st;
}

} // namespace

TEST_SUITE("lagrangian") {

TEST_CASE("two-cell free energy closed form") {
    const ParticleState st = symmetric_two_cell_state();
    const double term = 2.0 * 0.25 *
                        (0.5 * (std::log(0.1875) + std::log(0.25)) + std::log(2.0));
    CHECK(discrete_free_energy(st) == doctest::Approx(2.0 * term).epsilon(1e-14));
}

TEST_CASE("free energy finite only inside the admissible set") {
    ParticleState st = symmetric_two_cell_state();
    CHECK(std::isfinite(discrete_free_energy(st)));
    std::vector<double> bad = {0.25, 0.25, 0.75}; // coincident points
    CHECK_THROWS_AS(discrete_free_energy(bad, st), AdmissibleSetError);
    std::vector<double> reversed = {0.25, 0.6, 0.5};
    CHECK_THROWS_AS(discrete_free_energy(reversed, st), AdmissibleSetError);
}

TEST_CASE("energy and dissipation match term-by-term oracles") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const auto st = oracle::random_state(rng, 8, 0.02);
        CHECK(close_mixed(discrete_free_energy(st), oracle::free_energy(st.positions, st),
                          1e-14));
        std::uniform_real_distribution<double> vdist(-1.0, 1.0);
        std::vector<double> v(st.n_points(), 0.0);
        for (std::size_t i = 1; i + 1 < v.size(); ++i) v[i] = vdist(rng);
        CHECK(close_mixed(discrete_dissipation(st, v), oracle::dissipation(st, v),
                          1e-14));
    }
}

TEST_CASE("dissipation basics") {
    const ParticleState st = symmetric_two_cell_state();
    std::vector<double> zero(3, 0.0);
    CHECK(discrete_dissipation(st, zero) == 0.0);
    std::vector<double> v = {0.0, 0.3, 0.0};
    CHECK(discrete_dissipation(st, v) > 0.0);
    std::vector<double> wrong(4, 0.0);
    CHECK_THROWS_AS(discrete_dissipation(st, wrong), AdmissibleSetError);
}

TEST_CASE("residual vanishes for the symmetric single interior particle") {
    const ParticleState st = symmetric_two_cell_state();
    const auto r = force_residual_B(st.positions, st, 1e-3);
    CHECK(r[0] == 0.0);
    CHECK(r[2] == 0.0);
    CHECK(std::abs(r[1]) < 1e-15);
}

TEST_CASE("residual matches the term-by-term oracle") {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 100; ++trial) {
        const auto st = oracle::random_state(rng, 8, 0.015);
        const auto y = oracle::perturbed_candidate(rng, st);
        const auto r = force_residual_B(y, st, 1e-3);
        const auto r_oracle = oracle::residual_B(y, st, 1e-3);
        for (std::size_t i = 0; i < r.size(); ++i) {
            CHECK(close_mixed(r[i], r_oracle[i], 1e-14));
        }
    }
}

TEST_CASE("residual rejects candidates outside the admissible set") {
    const ParticleState st = symmetric_two_cell_state();
    std::vector<double> bad = {0.25, 0.8, 0.75};
    CHECK_THROWS_AS(force_residual_B(bad, st, 1e-3), AdmissibleSetError);
}

TEST_CASE("objective reduces to the energy at the reference grid") {
    std::mt19937_64 rng(303);
    const auto st = oracle::random_state(rng, 12, 0.02);
    CHECK(objective_J(st.positions, st, 1e-3) ==
          doctest::Approx(discrete_free_energy(st)).epsilon(1e-14));
    // the movement term is nonnegative
    const auto y = oracle::perturbed_candidate(rng, st);
    CHECK(objective_J(y, st, 1e-3) >= discrete_free_energy(y, st) - 1e-15);
    CHECK(close_mixed(objective_J(y, st, 1e-3), oracle::objective(y, st, 1e-3), 1e-14));
}

TEST_CASE("objective gradient matches central differences") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const auto st = oracle::random_state(rng, 8, 0.02);
        const auto y = oracle::perturbed_candidate(rng, st, 0.2);
        const double tau = 1e-3;
        const auto g = objective_J_gradient(y, st, tau);
        const auto fd = oracle::central_gradient(
            [&](std::span<const double> p) { return objective_J(p, st, tau); }, y, 3e-7);
        for (std::size_t i = 1; i + 1 < y.size(); ++i) {
            CHECK(close_mixed(g[i], fd[i], 1e-6));
        }
    }
}

TEST_CASE("hessian matches finite differences of the gradient") {
    std::mt19937_64 rng(505);
    const auto st = oracle::random_state(rng, 6, 0.05);
    const auto y = oracle::perturbed_candidate(rng, st, 0.2);
    const double tau = 1e-3;
    const auto H = objective_J_hessian(y, st, tau);

    std::vector<double> work(y);
    const double step = 1e-6;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        work[i] = y[i] + step;
        const auto gp = objective_J_gradient(work, st, tau);
        work[i] = y[i] - step;
        const auto gm = objective_J_gradient(work, st, tau);
        work[i] = y[i];
        for (std::size_t j = 1; j + 1 < y.size(); ++j) {
            const double fd = (gp[j] - gm[j]) / (2.0 * step);
            double analytic = 0.0;
            if (j == i) analytic = H.diag[i - 1];
            else if (j + 1 == i) analytic = H.lower[j - 1];
            else if (j == i + 1) analytic = H.upper[i - 1];
            CHECK(close_mixed(analytic, fd, 2e-5));
        }
    }
}

TEST_CASE("convexity bound closed form and limits") {
    const double delta = 0.01;
    const double w = delta * (1.0 - delta);
    CHECK(convexity_tau_bound(delta) ==
          doctest::Approx(8.0 * w * w / (1.0 - 2.0 * w)).epsilon(1e-15));
    CHECK(convexity_tau_bound(1e-6) < 1e-10);
}

TEST_CASE("hessian is diagonally dominant within the tau bound") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> dd(0.005, 0.045);
    std::uniform_int_distribution<std::size_t> nn(4, 64);
    for (int trial = 0; trial < 100; ++trial) {
        const double delta = dd(rng);
        const auto st = oracle::random_state(rng, nn(rng), delta);
        const auto y = oracle::perturbed_candidate(rng, st);
        const auto H = objective_J_hessian(y, st, convexity_tau_bound(delta));
        CHECK(H.diagonally_dominant());
    }
}

TEST_CASE("implicit step B leaves the symmetric particle in place") {
    const ParticleState st = symmetric_two_cell_state();
    const auto y = step_implicit_B(st, 1e-3);
    CHECK(y[1] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(y[0] == 0.25);
    CHECK(y[2] == 0.75);
}

TEST_CASE("implicit step B meets its residual contract on random states") {
    std::mt19937_64 rng(707);
    for (int trial = 0; trial < 25; ++trial) {
        const auto st = oracle::random_state(rng, 32, 0.01, 0.2, 2.5);
        const double tau = 1e-4;
        const auto y = step_implicit_B(st, tau, 1e-12, 500);
        CHECK(strictly_ordered(y));
        CHECK(y.front() == st.positions.front());
        CHECK(y.back() == st.positions.back());
        const auto r = force_residual_B(y, st, tau);
        double norm = 0.0;
        for (double v : r) norm = std::max(norm, std::abs(v));
        CHECK(norm <= 1e-12);
    }
}

TEST_CASE("implicit step B copes with zero-mass cells") {
    std::mt19937_64 rng(808);
    auto st = oracle::random_state(rng, 16, 0.02);
    st.cell_densities[5] = 0.0;
    st.cell_densities[6] = 0.0;
    const auto y = step_implicit_B(st, 1e-4);
    CHECK(strictly_ordered(y));
}

TEST_CASE("implicit step A: symmetric case, optimality, energy decrease") {
    const ParticleState sym = symmetric_two_cell_state();
    const auto y0 = step_implicit_A(sym, 1e-3);
    CHECK(y0[1] == doctest::Approx(0.5).epsilon(1e-12));

    std::mt19937_64 rng(909);
    for (int trial = 0; trial < 10; ++trial) {
        const auto st = oracle::random_state(rng, 24, 0.02, 0.2, 2.5);
        const double tau = std::min(1e-4, 0.9 * convexity_tau_bound(0.02));
        const auto y = step_implicit_A(st, tau, 1e-10, 2000);
        const auto g = objective_J_gradient(y, st, tau);
        double gnorm = 0.0;
        for (double v : g) gnorm = std::max(gnorm, std::abs(v));
        CHECK(gnorm <= 1e-10);
        CHECK(discrete_free_energy(y, st) <= discrete_free_energy(st) + 1e-12);
    }
}

TEST_CASE("variants A and B agree to step-size order on smooth data") {
    SolverConfig cfg;
    cfg.delta = 0.01;
    cfg.n_particles = 32;
    auto [st, masses] = build_initial_state(cfg);
    const double tau = 1e-5;
    const auto ya = step_implicit_A(st, tau, 1e-13, 5000);
    const auto yb = step_implicit_B(st, tau, 1e-13, 5000);
    double diff = 0.0;
    for (std::size_t i = 0; i < ya.size(); ++i) {
        diff = std::max(diff, std::abs(ya[i] - yb[i]));
    }
    CHECK(diff <= 1e-7);
}

TEST_CASE("step B tracks the fine Eulerian reference at t = 0.1") {
    SolverConfig cfg;
    cfg.delta = 0.01;
    cfg.tau = 1e-4;
    cfg.n_particles = 150;
    cfg.t_final = 0.1;
    const auto lagr = run_lagrangian(cfg, Stepper::ImplicitB, 0);
    const auto euler = run_eulerian(cfg.delta, cfg.alpha_value(), 2000, cfg.t_final,
                                    initial_density_function(cfg), cfg.tau);
    const auto err = linf_errors(lagr.state, euler.state, lagr.ab_trace, euler.ab_trace);
    // within a factor of 3 of the published N = 150 error scale 3.7195e-2
    CHECK(err.rho <= 3.0 * 3.7195e-2);
}

} // TEST_SUITE
