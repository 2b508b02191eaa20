#include <doctest.h>

#include <cmath>
#include <numeric>

#include "kimura/errors.hpp"
#include "kimura/eulerian.hpp"
#include "kimura/initial_density.hpp"
#include "kimura/simulation.hpp"

using namespace kimura;

TEST_SUITE("eulerian") {

TEST_CASE("closed system keeps its bulk mass exactly") {
    const double delta = 0.05;
    auto st = make_eulerian_state(delta, 200, [](double) { return 1.0; });
    const double m0 = st.bulk_mass();
    const double tau = 0.5 * eulerian_max_tau(st);
    for (int k = 0; k < 2000; ++k) eulerian_step(st, tau, /*alpha=*/0.0);
    CHECK(std::abs(st.bulk_mass() - m0) <= 1e-13);
    CHECK(st.masses.a == 0.0);
    CHECK(st.masses.b == 0.0);
}

TEST_CASE("per-step total-mass defect stays at round-off") {
    const double delta = 0.01;
    auto st = make_eulerian_state(delta, 1000,
                                  [&](double x) { return initial_density_rho1(x, delta); });
    const double tau = 0.9 * eulerian_max_tau(st);
    for (int k = 0; k < 200; ++k) {
        const double before = st.total_mass();
        eulerian_step(st, tau, 1.98);
        CHECK(std::abs(st.total_mass() - before) <=
              1e-15 * static_cast<double>(st.m_cells()));
    }
}

TEST_CASE("total mass constant to 1e-12 over 1e5 steps at default resolution") {
    const double delta = 0.01;
    auto st = make_eulerian_state(delta, 10000,
                                  [&](double x) { return initial_density_rho1(x, delta); });
    const double m0 = st.total_mass();
    const double tau = 0.9 * eulerian_max_tau(st);
    for (int k = 0; k < 100000; ++k) eulerian_step(st, tau, 1.98);
    CHECK(std::abs(st.total_mass() - m0) <= 1e-12);
    CHECK(st.masses.a > 0.0);
    CHECK(st.masses.b > 0.0);
    for (double r : st.rho) CHECK(r >= 0.0);
}

TEST_CASE("cfl violation is rejected") {
    auto st = make_eulerian_state(0.01, 500, [](double) { return 1.0; });
    CHECK_THROWS_AS(eulerian_step(st, 1.01 * eulerian_max_tau(st), 1.0), CflError);
}

TEST_CASE("boundary masses are nondecreasing and densities stay nonnegative") {
    const double delta = 0.01;
    auto st = make_eulerian_state(delta, 500,
                                  [&](double x) { return initial_density_rho2(x, delta); });
    const double tau = 0.9 * eulerian_max_tau(st);
    double a_prev = 0.0, b_prev = 0.0;
    for (int k = 0; k < 5000; ++k) {
        eulerian_step(st, tau, 1.98);
        CHECK(st.masses.a >= a_prev);
        CHECK(st.masses.b >= b_prev);
        a_prev = st.masses.a;
        b_prev = st.masses.b;
    }
    for (double r : st.rho) CHECK(r >= 0.0);
}

TEST_CASE("first-moment increment matches the closed-system identity") {
    // alpha = 0: the discrete bulk moment increment telescopes to
    // tau (g_0 - g_{M-1}), the discrete counterpart of the O(delta) drift law
    const double delta = 0.02;
    auto st = make_eulerian_state(delta, 400,
                                  [&](double x) { return initial_density_rho1(x, delta); });
    const double tau = 0.8 * eulerian_max_tau(st);
    for (int k = 0; k < 50; ++k) {
        double moment_before = 0.0;
        for (std::size_t j = 0; j < st.m_cells(); ++j) {
            moment_before += st.center(j) * st.rho[j] * st.h;
        }
        const double rho_l = st.rho.front();
        const double rho_r = st.rho.back();
        const double c0 = st.center(0);
        const double cm = st.center(st.m_cells() - 1);
        const double exact_increment =
            tau * (c0 * (1.0 - c0) * rho_l - cm * (1.0 - cm) * rho_r);

        eulerian_step(st, tau, 0.0);

        double moment_after = 0.0;
        for (std::size_t j = 0; j < st.m_cells(); ++j) {
            moment_after += st.center(j) * st.rho[j] * st.h;
        }
        const double increment = moment_after - moment_before;
        // 1e-12 absorbs the cancellation noise of the two O(1) moment sums
        CHECK(std::abs(increment - exact_increment) <= 1e-12);

        // ... and agrees with the continuum rate delta(1-delta)(rho_l - rho_r)
        // up to the O(h) boundary quadrature offset
        const double continuum = tau * delta * (1.0 - delta) * (rho_l - rho_r);
        const double offset_bound = tau * 0.5 * st.h * (rho_l + rho_r) * 1.001;
        CHECK(std::abs(increment - continuum) <= offset_bound);
    }
}

TEST_CASE("interpolation reproduces cell values and linear fields") {
    const double delta = 0.01;
    auto st = make_eulerian_state(delta, 100, [](double x) { return 2.0 + 3.0 * x; });
    std::vector<double> pts = {st.center(0), st.center(17), st.center(99)};
    auto vals = evaluate_at(st, pts);
    CHECK(vals[0] == doctest::Approx(st.rho[0]).epsilon(1e-13));
    CHECK(vals[1] == doctest::Approx(st.rho[17]).epsilon(1e-13));
    CHECK(vals[2] == doctest::Approx(st.rho[99]).epsilon(1e-13));

    std::vector<double> inner = {0.1234, 0.5, 0.87, delta, 1.0 - delta};
    for (double v : evaluate_at(st, inner)) CHECK(v >= 0.0);
    auto lin = evaluate_at(st, std::vector<double>{0.3});
    CHECK(lin[0] == doctest::Approx(2.0 + 0.9).epsilon(1e-12));
}

TEST_CASE("interpolation error on a smooth profile at fine resolution") {
    const double delta = 0.01;
    auto profile = [](double x) { return 1.0 + 0.5 * std::sin(5.0 * x) + x * x; };
    auto st = make_eulerian_state(delta, 10000, profile);
    std::vector<double> pts;
    for (int k = 0; k < 500; ++k) {
        pts.push_back(delta + (1.0 - 2.0 * delta) * (k + 0.31) / 500.0);
    }
    const auto vals = evaluate_at(st, pts);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        CHECK(std::abs(vals[k] - profile(pts[k])) <= 1e-8);
    }
}

TEST_CASE("extrapolation requests are rejected") {
    auto st = make_eulerian_state(0.01, 100, [](double) { return 1.0; });
    CHECK_THROWS_AS(evaluate_at(st, std::vector<double>{0.005}), InterpolationError);
    CHECK_THROWS_AS(evaluate_at(st, std::vector<double>{0.999}), InterpolationError);
}

TEST_CASE("runner lands a/b samples on the record grid") {
    const double delta = 0.01;
    const auto run = run_eulerian(delta, 1.98, 200, 0.01,
                                  [&](double x) { return initial_density_rho1(x, delta); },
                                  1e-3, 5);
    REQUIRE(run.ab_trace.size() == 11);
    CHECK(run.ab_trace[3].t == doctest::Approx(3e-3).epsilon(1e-14));
    CHECK(run.records.front().t == 0.0);
    CHECK(run.records.back().t == doctest::Approx(0.01).epsilon(1e-12));
    // monotone traces
    for (std::size_t i = 1; i < run.ab_trace.size(); ++i) {
        CHECK(run.ab_trace[i].a >= run.ab_trace[i - 1].a);
        CHECK(run.ab_trace[i].b >= run.ab_trace[i - 1].b);
    }
}

} // TEST_SUITE
