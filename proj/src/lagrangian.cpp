#include "kimura/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "kimura/errors.hpp"

namespace kimura {

namespace {

double log_xw(double x) { return std::log(x * (1.0 - x)); }

void require_ordered(std::span<const double> y) {
    if (!strictly_ordered(y)) {
        throw AdmissibleSetError("candidate positions left the admissible set");
    }
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Largest mass weight (m_{i-1}+m_i)/2 over interior particles; sets the
/// scale of the residual map for the BB step-length safeguards.
double max_mass_weight(const ParticleState& ref) {
    double m = 0.0;
    for (std::size_t i = 1; i < ref.n_cells(); ++i) {
        m = std::max(m, 0.5 * (ref.cell_mass(i - 1) + ref.cell_mass(i)));
    }
    return m > 0.0 ? m : 1.0;
}

} // namespace

double discrete_free_energy(std::span<const double> candidate, const ParticleState& ref) {
    require_ordered(candidate);
    const std::size_t n = ref.n_cells();
    double energy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = ref.cell_densities[i];
        if (rho == 0.0) continue;
        const double h = ref.ref_widths[i];
        const double stretch = (candidate[i + 1] - candidate[i]) / h;
        const double avg_log = 0.5 * (log_xw(candidate[i]) + log_xw(candidate[i + 1]));
        energy += rho * (avg_log + std::log(rho / stretch)) * h;
    }
    if (!std::isfinite(energy)) {
        throw AdmissibleSetError("free energy is not finite");
    }
    return energy;
}

double discrete_free_energy(const ParticleState& state) {
    return discrete_free_energy(state.positions, state);
}

double discrete_dissipation(const ParticleState& state, std::span<const double> velocities) {
    const std::size_t n = state.n_cells();
    if (velocities.size() != n + 1) {
        throw AdmissibleSetError("velocity array must have one entry per grid point");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = state.cell_densities[i];
        if (rho == 0.0) continue;
        const double xl = state.positions[i];
        const double xr = state.positions[i + 1];
        d += 0.25 * rho *
             (velocities[i] * velocities[i] / (xl * (1.0 - xl)) +
              velocities[i + 1] * velocities[i + 1] / (xr * (1.0 - xr))) *
             state.ref_widths[i];
    }
    return d;
}

void force_residual_B(std::span<const double> candidate, const ParticleState& ref,
                      double tau, std::span<double> out) {
    const std::size_t n = ref.n_cells();
    require_ordered(candidate);
    out[0] = 0.0;
    out[n] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double ml = ref.cell_mass(i - 1);
        const double mr = ref.cell_mass(i);
        const double y = candidate[i];
        const double lhs = 0.5 * (ml + mr) *
                           ((y - ref.positions[i]) / tau + 1.0 - 2.0 * y);
        double flux = 0.0;
        if (ml > 0.0) flux += ml / (y - candidate[i - 1]);
        if (mr > 0.0) flux -= mr / (candidate[i + 1] - y);
        out[i] = lhs - flux * y * (1.0 - y);
    }
}

std::vector<double> force_residual_B(std::span<const double> candidate,
                                     const ParticleState& ref, double tau) {
    std::vector<double> out(candidate.size());
    force_residual_B(candidate, ref, tau, out);
    return out;
}

double objective_J(std::span<const double> candidate, const ParticleState& ref, double tau) {
    const std::size_t n = ref.n_cells();
    double movement = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double mw = 0.5 * (ref.cell_mass(i - 1) + ref.cell_mass(i));
        const double X = ref.positions[i];
        const double dy = candidate[i] - X;
        movement += mw / (X * (1.0 - X)) * dy * dy / (2.0 * tau);
    }
    return movement + discrete_free_energy(candidate, ref);
}

void objective_J_gradient(std::span<const double> candidate, const ParticleState& ref,
                          double tau, std::span<double> out) {
    const std::size_t n = ref.n_cells();
    require_ordered(candidate);
    out[0] = 0.0;
    out[n] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double ml = ref.cell_mass(i - 1);
        const double mr = ref.cell_mass(i);
        const double X = ref.positions[i];
        const double y = candidate[i];
        double g = (ml + mr) / (2.0 * X * (1.0 - X)) * (y - X) / tau;
        // d/dy_i of the free energy: weight term plus the two stretch terms.
        g += 0.5 * (ml + mr) * (1.0 - 2.0 * y) / (y * (1.0 - y));
        if (mr > 0.0) g += mr / (candidate[i + 1] - y);
        if (ml > 0.0) g -= ml / (y - candidate[i - 1]);
        out[i] = g;
    }
}

std::vector<double> objective_J_gradient(std::span<const double> candidate,
                                         const ParticleState& ref, double tau) {
    std::vector<double> out(candidate.size());
    objective_J_gradient(candidate, ref, tau, out);
    return out;
}

TridiagonalMatrix objective_J_hessian(std::span<const double> candidate,
                                      const ParticleState& ref, double tau) {
    const std::size_t n = ref.n_cells();
    require_ordered(candidate);
    TridiagonalMatrix H;
    if (n < 2) return H;
    const std::size_t m = n - 1; // interior unknowns y_1..y_{N-1}
    H.diag.assign(m, 0.0);
    H.lower.assign(m - 1, 0.0);
    H.upper.assign(m - 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double ml = ref.cell_mass(i - 1);
        const double mr = ref.cell_mass(i);
        const double X = ref.positions[i];
        const double y = candidate[i];
        const double w = y * (1.0 - y);
        double d = (ml + mr) / (2.0 * X * (1.0 - X) * tau);
        d += (ml + mr) * (2.0 * w - 1.0) / (2.0 * w * w);
        const double dl = candidate[i] - candidate[i - 1];
        const double dr = candidate[i + 1] - candidate[i];
        if (ml > 0.0) d += ml / (dl * dl);
        if (mr > 0.0) d += mr / (dr * dr);
        H.diag[i - 1] = d;
        if (i >= 2 && ml > 0.0) H.lower[i - 2] = -ml / (dl * dl);
        if (i + 1 < n && mr > 0.0) H.upper[i - 1] = -mr / (dr * dr);
    }
    return H;
}

double convexity_tau_bound(double delta) {
    const double w = delta * (1.0 - delta);
    return 8.0 * w * w / (1.0 - 2.0 * w);
}

namespace {

/// Shrinks the proposed update (halving, at most max_halvings times) until
/// y + step stays strictly ordered. Returns false if even the smallest
/// allowed step violates ordering.
bool safeguarded_apply(std::span<const double> y, std::vector<double>& step,
                       std::vector<double>& out, int max_halvings) {
    const std::size_t n = y.size();
    for (int attempt = 0; attempt <= max_halvings; ++attempt) {
        for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + step[i];
        if (strictly_ordered(out)) return true;
        for (double& s : step) s *= 0.5;
    }
    return false;
}

} // namespace

std::vector<double> step_implicit_B(const ParticleState& state, double tau,
                                    double fp_tol, int fp_max_iter) {
    const std::size_t np = state.n_points();
    std::vector<double> y(state.positions);
    std::vector<double> residual(np), new_residual(np), step(np), trial(np);

    force_residual_B(y, state, tau, residual);
    double norm = max_abs(residual);
    if (norm <= fp_tol) return y;

    const double lambda_ref = tau / max_mass_weight(state);
    const double lambda_min = 1e-6 * lambda_ref;
    const double lambda_max = 1e6 * lambda_ref;
    double lambda = lambda_ref;

    std::vector<double> best_y = y;
    double best_norm = norm;

    for (int iter = 0; iter < fp_max_iter; ++iter) {
        for (std::size_t i = 0; i < np; ++i) step[i] = -lambda * residual[i];
        if (!safeguarded_apply(y, step, trial, 60)) {
            throw AdmissibleSetError("transport step: ordering safeguard failed");
        }
        force_residual_B(trial, state, tau, new_residual);
        const double new_norm = max_abs(new_residual);
        if (new_norm <= fp_tol) return trial;

        // BB step length from the applied (possibly halved) update.
        double ss = 0.0, sg = 0.0;
        for (std::size_t i = 0; i < np; ++i) {
            const double s = trial[i] - y[i];
            ss += s * s;
            sg += s * (new_residual[i] - residual[i]);
        }
        lambda = sg > 0.0 ? std::clamp(ss / sg, lambda_min, lambda_max) : lambda_ref;

        y.swap(trial);
        residual.swap(new_residual);
        norm = new_norm;
        if (norm < best_norm) {
            best_norm = norm;
            best_y = y;
        } else if (norm > 1e6 * best_norm) {
            // runaway iterate: restart from the best point with a short step
            y = best_y;
            force_residual_B(y, state, tau, residual);
            norm = best_norm;
            lambda = 0.1 * lambda_ref;
        }
    }
    throw ConvergenceError("transport step (variant B) did not converge", best_norm);
}

std::vector<double> step_implicit_A(const ParticleState& state, double tau,
                                    double fp_tol, int fp_max_iter) {
    const double bound = convexity_tau_bound(state.positions.front());
    if (tau > bound) {
        std::clog << "kimura: warning: tau=" << tau
                  << " exceeds the convexity bound " << bound
                  << "; variant A may fail to converge\n";
    }

    const std::size_t np = state.n_points();
    std::vector<double> y(state.positions);
    std::vector<double> grad(np), new_grad(np), step(np), trial(np);

    objective_J_gradient(y, state, tau, grad);
    double gnorm = max_abs(grad);
    if (gnorm <= fp_tol) return y;
    double J = objective_J(y, state, tau);

    const double lambda_ref = tau / max_mass_weight(state);
    const double lambda_min = 1e-6 * lambda_ref;
    const double lambda_max = 1e6 * lambda_ref;
    double lambda = lambda_ref;
    constexpr double armijo = 1e-4;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    std::vector<double> best_y = y;
    double best_gnorm = gnorm;

    for (int iter = 0; iter < fp_max_iter; ++iter) {
        // Backtrack until the trial point is admissible and decreases J.
        // Once the required Armijo decrease falls below the floating-point
        // resolution of J itself, decreases are no longer measurable; from
        // there plain safeguarded BB carries the gradient norm down (the
        // objective is convex for tau within the bound, so the endgame is a
        // local contraction).
        bool accepted = false;
        double trial_J = J;
        double scale = 1.0;
        for (int attempt = 0; attempt < 60; ++attempt) {
            for (std::size_t i = 0; i < np; ++i) {
                step[i] = -scale * lambda * grad[i];
                trial[i] = y[i] + step[i];
            }
            if (strictly_ordered(trial)) {
                double gd = 0.0;
                for (std::size_t i = 0; i < np; ++i) gd += grad[i] * step[i];
                if (std::abs(armijo * gd) < 8.0 * eps * std::abs(J)) {
                    trial_J = objective_J(trial, state, tau);
                    accepted = true;
                    break;
                }
                trial_J = objective_J(trial, state, tau);
                if (trial_J <= J + armijo * gd) {
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if (!accepted) {
            throw AdmissibleSetError("variant A line search failed near the boundary");
        }

        objective_J_gradient(trial, state, tau, new_grad);
        double ss = 0.0, sg = 0.0;
        for (std::size_t i = 0; i < np; ++i) {
            const double s = trial[i] - y[i];
            ss += s * s;
            sg += s * (new_grad[i] - grad[i]);
        }
        lambda = sg > 0.0 ? std::clamp(ss / sg, lambda_min, lambda_max) : lambda_ref;

        y.swap(trial);
        grad.swap(new_grad);
        J = trial_J;
        gnorm = max_abs(grad);
        if (gnorm <= fp_tol) return y;
        if (gnorm < best_gnorm) {
            best_gnorm = gnorm;
            best_y = y;
        } else if (gnorm > 1e3 * best_gnorm && best_gnorm < 1.0) {
            // runaway endgame iterate: restart from the best point
            y = best_y;
            objective_J_gradient(y, state, tau, grad);
            J = objective_J(y, state, tau);
            gnorm = best_gnorm;
            lambda = 0.1 * lambda_ref;
        }
    }
    throw ConvergenceError("transport step (variant A) did not converge", best_gnorm);
}

} // namespace kimura
