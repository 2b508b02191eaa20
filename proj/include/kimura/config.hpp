#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

namespace kimura {

enum class InitialDensityKind {
    Rho1,   // skewed polynomial-plus-sine profile
    Rho2,   // two-bump truncated-Gaussian mixture
    Custom, // tabulated (x, rho) samples, interpolated linearly
};

/// Parameters of one solver run. alpha and eta are optional: unset alpha
/// resolves to the first-moment-conserving value 2(1-delta), unset eta to
/// twice the initial particle spacing.
struct SolverConfig {
    double delta = 0.01;
    std::optional<double> alpha;
    double tau = 1e-4;
    std::optional<double> eta;
    std::size_t n_particles = 150; // initial cell count N0
    double t_final = 1.5;
    InitialDensityKind initial_density = InitialDensityKind::Rho1;
    std::vector<std::pair<double, double>> custom_density;
    double fp_tol = 1e-12;
    int fp_max_iter = 500;

    double alpha_value() const { return alpha ? *alpha : 2.0 * (1.0 - delta); }
    double initial_spacing() const {
        return (1.0 - 2.0 * delta) / static_cast<double>(n_particles);
    }
    double eta_value() const { return eta ? *eta : 2.0 * initial_spacing(); }

    /// Throws ConfigError if any invariant is violated.
    void validate() const;
};

/// Reads key=value pairs ('#' starts a comment) into a config. Unknown keys
/// throw ConfigError. Keys: delta, alpha, tau, eta, particles, t_final,
/// initial_density (rho1|rho2), fp_tol, fp_max_iter.
SolverConfig load_config_file(const std::filesystem::path& path);

const char* to_string(InitialDensityKind kind);
InitialDensityKind initial_density_from_string(const std::string& name);

} // namespace kimura
