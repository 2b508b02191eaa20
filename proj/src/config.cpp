#include "kimura/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "kimura/errors.hpp"

namespace kimura {

void SolverConfig::validate() const {
    if (!(delta > 0.0) || !(delta < 0.5)) {
        throw ConfigError("delta must lie in (0, 1/2)");
    }
    if (!(tau > 0.0)) throw ConfigError("tau must be positive");
    if (alpha && !(*alpha > 0.0)) throw ConfigError("alpha must be positive");
    const double e = eta_value();
    if (!(e >= 0.0) || !(e < 0.5 * (1.0 - 2.0 * delta))) {
        throw ConfigError("eta must lie in [0, (1-2*delta)/2)");
    }
    if (n_particles < 2) throw ConfigError("n_particles must be at least 2");
    if (!(t_final >= 0.0)) throw ConfigError("t_final must be nonnegative");
    if (!(fp_tol > 0.0)) throw ConfigError("fp_tol must be positive");
    if (fp_max_iter < 1) throw ConfigError("fp_max_iter must be at least 1");
    if (initial_density == InitialDensityKind::Custom && custom_density.size() < 2) {
        throw ConfigError("custom initial density needs at least 2 samples");
    }
}

const char* to_string(InitialDensityKind kind) {
    switch (kind) {
    case InitialDensityKind::Rho1: return "rho1";
    case InitialDensityKind::Rho2: return "rho2";
    case InitialDensityKind::Custom: return "custom";
    }
    return "unknown";
}

InitialDensityKind initial_density_from_string(const std::string& name) {
    if (name == "rho1") return InitialDensityKind::Rho1;
    if (name == "rho2") return InitialDensityKind::Rho2;
    if (name == "custom") return InitialDensityKind::Custom;
    throw ConfigError("unknown initial density '" + name + "'");
}

SolverConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());

    SolverConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key=value");
        }
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        try {
            if (key == "delta") cfg.delta = std::stod(value);
            else if (key == "alpha") cfg.alpha = std::stod(value);
            else if (key == "tau") cfg.tau = std::stod(value);
            else if (key == "eta") cfg.eta = std::stod(value);
            else if (key == "particles") cfg.n_particles = std::stoul(value);
            else if (key == "t_final") cfg.t_final = std::stod(value);
            else if (key == "initial_density")
                cfg.initial_density = initial_density_from_string(value);
            else if (key == "fp_tol") cfg.fp_tol = std::stod(value);
            else if (key == "fp_max_iter") cfg.fp_max_iter = std::stoi(value);
            else
                throw ConfigError("unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": cannot parse value '" + value + "'");
        }
    }
    return cfg;
}

} // namespace kimura
