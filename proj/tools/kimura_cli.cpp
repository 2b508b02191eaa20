#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kimura/diagnostics.hpp"
#include "kimura/errors.hpp"
#include "kimura/experiments.hpp"
#include "kimura/initial_density.hpp"
#include "kimura/simulation.hpp"
#include "kimura/version.hpp"
#include "kimura/wright_fisher.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliOptions {
    std::string config_path;
    std::string scheme = "lagrangian-B";
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::size_t eulerian_cells = 10000;
    std::uint64_t wf_pop_size = 100;
    std::size_t wf_replicates = 10000;

    std::optional<double> delta, alpha, tau, eta, t_final;
    std::optional<std::size_t> particles;
    std::optional<std::string> initial_density;
};

void add_common_flags(CLI::App* app, CliOptions& opt) {
    app->add_option("--config", opt.config_path, "key=value config file");
    app->add_option("--scheme", opt.scheme,
                    "lagrangian-A | lagrangian-B | eulerian | wright-fisher");
    app->add_option("--delta", opt.delta, "domain truncation parameter");
    app->add_option("--alpha", opt.alpha, "boundary reaction rate");
    app->add_option("--tau", opt.tau, "time step");
    app->add_option("--eta", opt.eta, "buffer width");
    app->add_option("--particles", opt.particles, "initial cell count");
    app->add_option("--t-final", opt.t_final, "terminal time");
    app->add_option("--initial-density", opt.initial_density, "rho1 | rho2");
    app->add_option("--seed", opt.seed, "rng seed");
    app->add_option("--out", opt.out_dir, "output directory");
    app->add_option("--eulerian-cells", opt.eulerian_cells,
                    "reference grid resolution");
    app->add_option("--wf-pop-size", opt.wf_pop_size, "Wright-Fisher N");
    app->add_option("--wf-replicates", opt.wf_replicates,
                    "Wright-Fisher replicate count");
}

kimura::SolverConfig resolve_config(const CliOptions& opt) {
    kimura::SolverConfig cfg;
    if (!opt.config_path.empty()) cfg = kimura::load_config_file(opt.config_path);
    if (opt.delta) cfg.delta = *opt.delta;
    if (opt.alpha) cfg.alpha = *opt.alpha;
    if (opt.tau) cfg.tau = *opt.tau;
    if (opt.eta) cfg.eta = *opt.eta;
    if (opt.particles) cfg.n_particles = *opt.particles;
    if (opt.t_final) cfg.t_final = *opt.t_final;
    if (opt.initial_density) {
        cfg.initial_density = kimura::initial_density_from_string(*opt.initial_density);
    }
    cfg.validate();
    return cfg;
}

std::string stamp(const CliOptions& opt, const kimura::SolverConfig& cfg) {
    std::ostringstream s;
    s << opt.scheme << '_' << kimura::to_string(cfg.initial_density) << "_d"
      << cfg.delta << "_N" << cfg.n_particles << "_tau" << cfg.tau;
    return s.str();
}

json manifest_json(const CliOptions& opt, const kimura::SolverConfig& cfg) {
    return json{{"scheme", opt.scheme},
                {"seed", opt.seed},
                {"out_dir", opt.out_dir},
                {"version", kimura::version_string},
                {"config",
                 {{"delta", cfg.delta},
                  {"alpha", cfg.alpha_value()},
                  {"tau", cfg.tau},
                  {"eta", cfg.eta_value()},
                  {"particles", cfg.n_particles},
                  {"t_final", cfg.t_final},
                  {"initial_density", kimura::to_string(cfg.initial_density)},
                  {"fp_tol", cfg.fp_tol},
                  {"fp_max_iter", cfg.fp_max_iter}}}};
}

int cmd_run(const CliOptions& opt) {
    const kimura::SolverConfig cfg = resolve_config(opt);
    fs::create_directories(opt.out_dir);
    const fs::path out(opt.out_dir);
    const std::string base = stamp(opt, cfg);

    if (opt.scheme == "lagrangian-A" || opt.scheme == "lagrangian-B") {
        const auto stepper = opt.scheme == "lagrangian-A" ? kimura::Stepper::ImplicitA
                                                          : kimura::Stepper::ImplicitB;
        const auto result = kimura::run_lagrangian(cfg, stepper);
        kimura::write_diagnostics_csv(out / (base + "_diagnostics.csv"),
                                      result.records);
        kimura::write_density_csv(out / (base + "_density.csv"), result.state);
    } else if (opt.scheme == "eulerian") {
        const auto rho0 = kimura::initial_density_function(cfg);
        const auto result =
            kimura::run_eulerian(cfg.delta, cfg.alpha_value(), opt.eulerian_cells,
                                 cfg.t_final, rho0, cfg.tau);
        kimura::write_diagnostics_csv(out / (base + "_diagnostics.csv"),
                                      result.records);
        kimura::write_density_csv(out / (base + "_density.csv"), result.state);
    } else if (opt.scheme == "wright-fisher") {
        kimura::WFConfig wf;
        wf.pop_size = opt.wf_pop_size;
        wf.n_replicates = opt.wf_replicates;
        wf.rng_seed = opt.seed;
        wf.n_generations = static_cast<std::size_t>(std::llround(
            4.0 * static_cast<double>(opt.wf_pop_size) * cfg.t_final));
        wf.initial_sampler = kimura::make_density_sampler(
            kimura::initial_density_function(cfg), cfg.delta);
        const auto est = kimura::estimate_fixation(wf);

        std::ostringstream fix;
        fix << "quantity,estimate,se,ci95_lo,ci95_hi\n";
        fix << "p_fix_0," << kimura::format_double(est.p_fix_0) << ','
            << kimura::format_double(est.se_fix_0) << ','
            << kimura::format_double(est.p_fix_0 - 1.96 * est.se_fix_0) << ','
            << kimura::format_double(est.p_fix_0 + 1.96 * est.se_fix_0) << '\n';
        fix << "p_fix_1," << kimura::format_double(est.p_fix_1) << ','
            << kimura::format_double(est.se_fix_1) << ','
            << kimura::format_double(est.p_fix_1 - 1.96 * est.se_fix_1) << ','
            << kimura::format_double(est.p_fix_1 + 1.96 * est.se_fix_1) << '\n';
        kimura::write_text_file(out / (base + "_fixation.csv"), fix.str());

        std::ostringstream trace;
        trace << "generation,mean_frequency,se\n";
        for (std::size_t t = 0; t < est.mean_frequency.size(); ++t) {
            trace << t << ',' << kimura::format_double(est.mean_frequency[t]) << ','
                  << kimura::format_double(est.se_frequency[t]) << '\n';
        }
        kimura::write_text_file(out / (base + "_trace.csv"), trace.str());
    } else {
        throw kimura::ConfigError("unknown scheme '" + opt.scheme + "'");
    }

    kimura::write_text_file(out / (base + "_manifest.json"),
                            manifest_json(opt, cfg).dump(2) + "\n");
    std::cout << "wrote " << (out / base).string() << "_*.{csv,json}\n";
    return 0;
}

int cmd_table1(const CliOptions& opt) {
    kimura::Table1Params params;
    params.eulerian_cells = opt.eulerian_cells;
    if (opt.delta) params.delta = *opt.delta;
    if (opt.tau) params.tau = *opt.tau;
    if (opt.t_final) params.t_final = *opt.t_final;

    const auto result = kimura::run_table1(params);
    fs::create_directories(opt.out_dir);
    const fs::path path = fs::path(opt.out_dir) / "table1.csv";
    kimura::write_table1_csv(path, result);
    std::cout << kimura::format_table1(result) << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_compare_wf(const CliOptions& opt) {
    const kimura::SolverConfig cfg = resolve_config(opt);
    kimura::WfCompareParams params;
    params.pop_size = opt.wf_pop_size;
    params.n_replicates = opt.wf_replicates;
    params.seed = opt.seed;

    const auto cmp = kimura::run_compare_wf(cfg, params);
    fs::create_directories(opt.out_dir);
    const fs::path path = fs::path(opt.out_dir) / "compare_wf.csv";
    kimura::write_text_file(path, kimura::format_wf_comparison(cmp));
    std::cout << kimura::format_wf_comparison(cmp) << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_validate() {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    {
        kimura::SolverConfig cfg;
        cfg.initial_density = kimura::InitialDensityKind::Rho2;
        cfg.t_final = 0.2;
        const auto run = kimura::run_lagrangian(cfg);
        const double m0 = run.records.front().total_mass;
        double max_drift = 0.0;
        bool monotone = true;
        bool n_nonincreasing = true;
        bool positive = true;
        for (std::size_t i = 0; i < run.records.size(); ++i) {
            max_drift =
                std::max(max_drift, std::abs(run.records[i].total_mass - m0));
            if (i > 0) {
                monotone &= run.records[i].a >= run.records[i - 1].a &&
                            run.records[i].b >= run.records[i - 1].b;
                n_nonincreasing &=
                    run.records[i].n_particles <= run.records[i - 1].n_particles;
            }
        }
        for (double r : run.state.cell_densities) positive &= r >= 0.0;
        check("lagrangian mass conservation (drift <= 1e-11)", max_drift <= 1e-11);
        check("boundary masses nondecreasing", monotone);
        check("particle count nonincreasing", n_nonincreasing);
        check("densities nonnegative", positive);
    }
    {
        kimura::SolverConfig probe;
        const auto rho0 = kimura::initial_density_function(probe);
        const auto run = kimura::run_eulerian(probe.delta, probe.alpha_value(), 2000,
                                              0.05, rho0, 1e-3);
        const double m0 = run.records.front().total_mass;
        double max_drift = 0.0;
        for (const auto& r : run.records) {
            max_drift = std::max(max_drift, std::abs(r.total_mass - m0));
        }
        check("eulerian mass conservation (drift <= 1e-11)", max_drift <= 1e-11);
    }
    {
        kimura::WFConfig wf;
        wf.pop_size = 8;
        wf.n_generations = 200;
        wf.n_replicates = 2000;
        wf.initial_frequency = 0.5;
        wf.rng_seed = 9001;
        const auto est = kimura::estimate_fixation(wf);
        const double drift =
            std::abs(est.mean_frequency.back() - est.mean_frequency.front());
        check("wright-fisher martingale (drift <= 3 se)",
              drift <= 3.0 * est.se_frequency.back());
        check("wright-fisher absorption completes", est.p_fix_0 + est.p_fix_1 > 0.99);
    }
    return failures == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structure-preserving solver for genetic-drift fixation dynamics"};
    app.require_subcommand(1);

    CliOptions opt;
    auto* run = app.add_subcommand("run", "run one solver trajectory");
    add_common_flags(run, opt);
    auto* table1 = app.add_subcommand("table1", "grid-refinement error table");
    add_common_flags(table1, opt);
    auto* compare = app.add_subcommand("compare-wf",
                                       "PDE vs Wright-Fisher vs quadrature fixation");
    add_common_flags(compare, opt);
    auto* validate = app.add_subcommand("validate", "quick invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(opt);
        if (table1->parsed()) return cmd_table1(opt);
        if (compare->parsed()) return cmd_compare_wf(opt);
        if (validate->parsed()) return cmd_validate();
    } catch (const kimura::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
