#include "kimura/experiments.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "kimura/errors.hpp"
#include "kimura/initial_density.hpp"
#include "kimura/numerics.hpp"
#include "kimura/wright_fisher.hpp"

namespace kimura {

Table1Result run_table1(const Table1Params& params) {
    const double delta = params.delta;
    const double alpha = 2.0 * (1.0 - delta);

    auto eulerian_for = [&](InitialDensityKind kind) {
        SolverConfig probe;
        probe.delta = delta;
        probe.initial_density = kind;
        const auto rho0 = initial_density_function(probe);
        return run_eulerian(delta, alpha, params.eulerian_cells, params.t_final, rho0,
                            params.tau);
    };

    // the two fine reference runs dominate the cost; overlap them
    auto fut1 = std::async(std::launch::async, eulerian_for, InitialDensityKind::Rho1);
    auto fut2 = std::async(std::launch::async, eulerian_for, InitialDensityKind::Rho2);

    auto lagrangian_for = [&](InitialDensityKind kind, std::size_t n) {
        SolverConfig cfg;
        cfg.delta = delta;
        cfg.tau = params.tau;
        cfg.t_final = params.t_final;
        cfg.n_particles = n;
        cfg.initial_density = kind;
        return run_lagrangian(cfg, Stepper::ImplicitB, 0);
    };

    std::vector<std::future<LagrangianRunResult>> lagr1, lagr2;
    for (std::size_t n : params.grid_sizes) {
        lagr1.push_back(
            std::async(std::launch::async, lagrangian_for, InitialDensityKind::Rho1, n));
        lagr2.push_back(
            std::async(std::launch::async, lagrangian_for, InitialDensityKind::Rho2, n));
    }

    const EulerianRunResult euler1 = fut1.get();
    const EulerianRunResult euler2 = fut2.get();

    Table1Result result;
    result.grid_sizes = params.grid_sizes;
    for (std::size_t i = 0; i < params.grid_sizes.size(); ++i) {
        const LagrangianRunResult r1 = lagr1[i].get();
        const LagrangianRunResult r2 = lagr2[i].get();
        result.rho1_errors.push_back(
            linf_errors(r1.state, euler1.state, r1.ab_trace, euler1.ab_trace));
        result.rho2_errors.push_back(
            linf_errors(r2.state, euler2.state, r2.ab_trace, euler2.ab_trace));
    }
    return result;
}

std::string format_table1(const Table1Result& result) {
    std::ostringstream out;
    out << "N,rho1_rho_err,rho1_a_err,rho1_b_err,rho2_rho_err,rho2_a_err,rho2_b_err\n";
    for (std::size_t i = 0; i < result.grid_sizes.size(); ++i) {
        const auto& e1 = result.rho1_errors[i];
        const auto& e2 = result.rho2_errors[i];
        out << result.grid_sizes[i] << ',' << format_double(e1.rho) << ','
            << format_double(e1.a) << ',' << format_double(e1.b) << ','
            << format_double(e2.rho) << ',' << format_double(e2.a) << ','
            << format_double(e2.b) << '\n';
    }
    return out.str();
}

void write_table1_csv(const std::filesystem::path& path, const Table1Result& result) {
    write_text_file(path, format_table1(result));
}

WfComparison run_compare_wf(const SolverConfig& cfg, const WfCompareParams& params) {
    cfg.validate();
    WfComparison cmp;

    const auto rho0 = initial_density_function(cfg);
    cmp.b_quad = adaptive_simpson([&](double x) { return x * rho0(x); }, cfg.delta,
                                  1.0 - cfg.delta, 1e-12);
    cmp.a_quad = adaptive_simpson([&](double x) { return (1.0 - x) * rho0(x); },
                                  cfg.delta, 1.0 - cfg.delta, 1e-12);

    const LagrangianRunResult pde = run_lagrangian(cfg, Stepper::ImplicitB, 0);
    cmp.a_pde = pde.masses.a;
    cmp.b_pde = pde.masses.b;

    WFConfig wf;
    wf.pop_size = params.pop_size;
    wf.n_replicates = params.n_replicates;
    wf.rng_seed = params.seed;
    // one generation is 1/(4N) of rescaled PDE time; cap at the PDE horizon
    // or until absorption dominates
    wf.n_generations = static_cast<std::size_t>(
        std::llround(4.0 * static_cast<double>(params.pop_size) *
                     std::max(cfg.t_final, 1.5)));
    wf.initial_sampler = make_density_sampler(rho0, cfg.delta);
    const FixationEstimate est = estimate_fixation(wf);
    cmp.p_fix_0 = est.p_fix_0;
    cmp.p_fix_1 = est.p_fix_1;
    cmp.se_fix_0 = est.se_fix_0;
    cmp.se_fix_1 = est.se_fix_1;
    return cmp;
}

std::string format_wf_comparison(const WfComparison& c) {
    std::ostringstream out;
    out << "quantity,pde,wright_fisher,quadrature\n"
        << "a_infinity," << format_double(c.a_pde) << ',' << format_double(c.p_fix_0)
        << ',' << format_double(c.a_quad) << '\n'
        << "b_infinity," << format_double(c.b_pde) << ',' << format_double(c.p_fix_1)
        << ',' << format_double(c.b_quad) << '\n'
        << "se_fix_0," << format_double(c.se_fix_0) << ",,\n"
        << "se_fix_1," << format_double(c.se_fix_1) << ",,\n";
    return out.str();
}

} // namespace kimura
