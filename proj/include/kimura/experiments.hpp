#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kimura/config.hpp"
#include "kimura/diagnostics.hpp"
#include "kimura/simulation.hpp"

namespace kimura {

/// Grid-refinement error study: Lagrangian runs at N in {150, 300, 600, 1200}
/// against one fine Eulerian reference per initial density, both profiles,
/// delta = 0.01, alpha = 2(1-delta), T = 1.0, tau = 1e-4.
struct Table1Result {
    std::vector<std::size_t> grid_sizes;
    std::vector<ErrorTriple> rho1_errors; // one per grid size
    std::vector<ErrorTriple> rho2_errors;
};

struct Table1Params {
    double delta = 0.01;
    double tau = 1e-4;
    double t_final = 1.0;
    std::size_t eulerian_cells = 10000;
    std::vector<std::size_t> grid_sizes = {150, 300, 600, 1200};
};

/// Runs the study; the two Eulerian baselines and the Lagrangian runs are
/// fanned out over worker threads.
Table1Result run_table1(const Table1Params& params = {});

/// CSV with one row per grid size and the six error columns.
void write_table1_csv(const std::filesystem::path& path, const Table1Result& result);
std::string format_table1(const Table1Result& result);

/// Three-way fixation comparison: PDE boundary masses at t_final, Wright-
/// Fisher Monte-Carlo absorption frequencies started from the same initial
/// density, and the quadrature values int (1-x) rho_0 and int x rho_0.
struct WfComparison {
    double a_pde = 0.0, b_pde = 0.0;       // boundary masses at t_final
    double a_quad = 0.0, b_quad = 0.0;     // integrals of (1-x), x against rho_0
    double p_fix_0 = 0.0, p_fix_1 = 0.0;   // Monte-Carlo estimates
    double se_fix_0 = 0.0, se_fix_1 = 0.0; // their standard errors
};

struct WfCompareParams {
    std::uint64_t pop_size = 100;
    std::size_t n_replicates = 10000;
    std::uint64_t seed = 0;
};

WfComparison run_compare_wf(const SolverConfig& cfg, const WfCompareParams& params);
std::string format_wf_comparison(const WfComparison& c);

} // namespace kimura
