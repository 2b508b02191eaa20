#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "kimura/boundary.hpp"
#include "kimura/config.hpp"
#include "kimura/diagnostics.hpp"
#include "kimura/eulerian.hpp"
#include "kimura/state.hpp"

namespace kimura {

enum class Stepper { ImplicitA, ImplicitB };

/// Operator-splitting trajectory driver. Each step() runs the implicit
/// transport solve, merges buffer particles, and applies the boundary-mass
/// update with its mass-conserving density correction. Once fewer than two
/// cells remain outside the buffers the bulk is frozen and only the boundary
/// ODEs keep draining the two boundary cells, until a + b >= 1 - 1e-10 or
/// t_final.
class LagrangianSimulation {
public:
    LagrangianSimulation(SolverConfig cfg, Stepper stepper = Stepper::ImplicitB);

    struct StepInfo {
        bool bulk_frozen = false;
        bool merged = false;
        double energy_before = 0.0; // discrete free energy around step 1
        double energy_after = 0.0;
        MergeReport report;
    };
    StepInfo step();

    const ParticleState& state() const { return state_; }
    const BoundaryMasses& masses() const { return masses_; }
    double time() const { return t_; }
    bool frozen() const { return frozen_; }
    bool fully_absorbed() const;
    const SolverConfig& config() const { return cfg_; }
    DiagnosticsRecord record() const {
        return make_record(state_, masses_, cfg_.delta, t_);
    }

private:
    SolverConfig cfg_;
    Stepper stepper_;
    ParticleState state_;
    BoundaryMasses masses_;
    double t_ = 0.0;
    bool frozen_ = false;
};

struct LagrangianRunResult {
    ParticleState state;
    BoundaryMasses masses;
    std::vector<DiagnosticsRecord> records; // every diag_every steps + final
    std::vector<AbSample> ab_trace;         // every step, including t = 0
    double t_final = 0.0;
    bool frozen = false;
};

/// Runs the full trajectory to cfg.t_final.
LagrangianRunResult run_lagrangian(const SolverConfig& cfg,
                                   Stepper stepper = Stepper::ImplicitB,
                                   std::size_t diag_every = 1);

struct EulerianRunResult {
    EulerianState state;
    std::vector<DiagnosticsRecord> records;
    std::vector<AbSample> ab_trace; // at multiples of record_dt
    double t_final = 0.0;
};

/// Reference run: M uniform cells, explicit stepping at the largest stable
/// step that divides record_dt evenly (so a/b samples land exactly on the
/// record grid), diagnostics every diag_every records.
EulerianRunResult run_eulerian(double delta, double alpha, std::size_t m_cells,
                               double t_final, const std::function<double(double)>& rho0,
                               double record_dt, std::size_t diag_every = 100,
                               double cfl_safety = 0.9);

} // namespace kimura
