#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "kimura/boundary.hpp"
#include "kimura/errors.hpp"
#include "kimura/state.hpp"
#include "oracle_utils.hpp"

using namespace kimura;

TEST_SUITE("boundary") {

TEST_CASE("empty buffers keep every interior particle") {
    std::vector<double> x = {0.01, 0.2, 0.4, 0.6, 0.8, 0.99};
    const auto rep = detect_buffer(x, 0.01, 0.0);
    CHECK(rep.i_c == 1);
    CHECK(rep.i_f == 4);
    CHECK_FALSE(rep.terminal);
    CHECK(rep.new_n_points == 4 - 1 + 3);
}

TEST_CASE("buffer indices follow the min/max definitions") {
    std::vector<double> x = {0.01, 0.015, 0.3, 0.7, 0.99};
    const auto rep = detect_buffer(x, 0.01, 0.01);
    CHECK(rep.i_c == 2);
    CHECK(rep.i_f == 3);
    // only one cell would remain between the buffers -> terminal signal
    CHECK(rep.terminal);
}

TEST_CASE("buffer detection agrees with a linear-scan oracle") {
    std::mt19937_64 rng(111);
    std::uniform_real_distribution<double> ed(0.0, 0.05);
    for (int trial = 0; trial < 200; ++trial) {
        const double delta = 0.01;
        const auto st = oracle::random_state(rng, 20, delta);
        const double eta = ed(rng);
        const auto rep = detect_buffer(st.positions, delta, eta);
        const auto [ic, If] = oracle::buffer_scan(st.positions, delta, eta);
        REQUIRE(ic >= 0);
        REQUIRE(If >= 0);
        CHECK(rep.i_c == static_cast<std::size_t>(ic));
        CHECK(rep.i_f == static_cast<std::size_t>(If));
        CHECK(rep.terminal == (If < ic || If - ic < 2));
    }
}

TEST_CASE("no-merge update only rescales by the width ratio") {
    std::mt19937_64 rng(222);
    const auto st = oracle::random_state(rng, 12, 0.01);
    const auto y = oracle::perturbed_candidate(rng, st, 0.3);
    auto rep = detect_buffer(y, 0.01, 0.0);
    REQUIRE(rep.i_c == 1);
    REQUIRE(rep.i_f == 12 - 1);
    const auto merged = merge_and_update_densities(st, y, rep);
    REQUIRE(merged.n_cells() == st.n_cells());
    CHECK(rep.removed_left_mass == 0.0);
    CHECK(rep.removed_right_mass == 0.0);
    for (std::size_t i = 0; i < st.n_cells(); ++i) {
        CHECK(std::abs(merged.cell_mass(i) - st.cell_mass(i)) <= 1e-15);
    }
}

TEST_CASE("left merge bookkeeping matches mass sums") {
    // reference grid whose first two interior particles drift into the buffer
    ParticleState st;
    st.positions = {0.01, 0.15, 0.3, 0.45, 0.6, 0.8, 0.99};
    st.cell_densities = {1.0, 1.5, 0.5, 2.0, 1.0, 0.8};
    st.ref_widths.resize(6);
    for (std::size_t i = 0; i < 6; ++i) {
        st.ref_widths[i] = st.positions[i + 1] - st.positions[i];
    }
    std::vector<double> y = {0.01, 0.02, 0.025, 0.3, 0.5, 0.7, 0.99};
    const double eta = 0.05;
    auto rep = detect_buffer(y, 0.01, eta);
    REQUIRE(rep.i_c == 3);
    REQUIRE(rep.i_f == 5);
    REQUIRE_FALSE(rep.terminal);

    const double bulk_before = st.bulk_mass();
    const auto merged = merge_and_update_densities(st, y, rep);
    // removed particles y_1, y_2 carried cells 1 and 2
    CHECK(rep.removed_left_mass ==
          doctest::Approx(st.cell_mass(1) + st.cell_mass(2)).epsilon(1e-15));
    const double left_cell_mass = merged.cell_densities.front() *
                                  (merged.positions[1] - merged.positions[0]);
    CHECK(left_cell_mass ==
          doctest::Approx(st.cell_mass(0) + st.cell_mass(1) + st.cell_mass(2))
              .epsilon(1e-14));
    CHECK(merged.bulk_mass() == doctest::Approx(bulk_before).epsilon(1e-14));
    CHECK(merged.n_points() == rep.new_n_points);
    CHECK(rep.new_n_points == 5 - 3 + 3);
}

TEST_CASE("merging conserves bulk mass on random states") {
    std::mt19937_64 rng(333);
    for (int trial = 0; trial < 100; ++trial) {
        const double delta = 0.01;
        const auto st = oracle::random_state(rng, 30, delta);
        auto y = oracle::perturbed_candidate(rng, st, 0.3);
        auto rep = detect_buffer(y, delta, 0.08);
        if (rep.terminal) continue;
        const auto merged = merge_and_update_densities(st, y, rep);
        CHECK(std::abs(merged.bulk_mass() - st.bulk_mass()) <= 1e-14);
        CHECK(merged.n_points() <= st.n_points());
        CHECK(strictly_ordered(merged.positions));
    }
}

TEST_CASE("boundary mass update is one multiply-add per side") {
    BoundaryMasses m;
    m = update_boundary_masses(m, 0.0, 0.0, 1e-4, 1.98);
    CHECK(m.a == 0.0);
    CHECK(m.b == 0.0);
    m = update_boundary_masses(m, 1.0, 0.5, 1e-4, 1.98);
    CHECK(m.a == doctest::Approx(1.98e-4).epsilon(1e-15));
    CHECK(m.b == doctest::Approx(0.99e-4).epsilon(1e-15));
}

TEST_CASE("boundary density correction balances the mass handed to a and b") {
    ParticleState st;
    st.positions = {0.01, 0.2, 0.8, 0.99};
    st.cell_densities = {1.2, 0.9, 1.4};
    st.ref_widths = {0.19, 0.6, 0.19};

    SUBCASE("tau = 0 is the identity") {
        auto copy = st;
        correct_boundary_densities(copy, 0.0, 2.0, 0.01);
        CHECK(copy.cell_densities[0] == st.cell_densities[0]);
        CHECK(copy.cell_densities[2] == st.cell_densities[2]);
    }

    SUBCASE("combined step-2 mass balance is exact") {
        const double tau = 1e-4, alpha = 1.98, delta = 0.01;
        const double rho_l = st.cell_densities.front();
        const double rho_r = st.cell_densities.back();
        BoundaryMasses m0{0.3, 0.1};
        const BoundaryMasses m1 = update_boundary_masses(m0, rho_l, rho_r, tau, alpha);
        auto corrected = st;
        correct_boundary_densities(corrected, tau, alpha, delta);
        const double da = m1.a - m0.a;
        const double dcell = (corrected.cell_densities[0] - rho_l) *
                             (st.positions[1] - delta);
        CHECK(std::abs(da + dcell) <= 1e-18);
        const double db = m1.b - m0.b;
        const double dcell_r = (corrected.cell_densities[2] - rho_r) *
                               (1.0 - delta - st.positions[2]);
        CHECK(std::abs(db + dcell_r) <= 1e-18);
    }

    SUBCASE("overlong steps are rejected") {
        auto copy = st;
        CHECK_THROWS_AS(correct_boundary_densities(copy, 0.2, 2.0, 0.01),
                        StepSizeError);
    }
}

TEST_CASE("merge refuses terminal reports") {
    ParticleState st;
    st.positions = {0.01, 0.5, 0.99};
    st.cell_densities = {1.0, 1.0};
    st.ref_widths = {0.49, 0.49};
    MergeReport rep;
    rep.terminal = true;
    CHECK_THROWS_AS(merge_and_update_densities(st, st.positions, rep),
                    AdmissibleSetError);
}

} // TEST_SUITE
