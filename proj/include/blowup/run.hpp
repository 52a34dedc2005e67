#pragma once

// Time loop: step, record, watch for singularity formation.

#include "blowup/config.hpp"
#include "blowup/diagnostics.hpp"
#include "blowup/initial_data.hpp"
#include "blowup/model.hpp"
#include "blowup/riccati.hpp"
#include "blowup/solver.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace blowup {

struct SimulationOutput {
    std::vector<TimeSeriesRecord> series;
    FluidState final_state;
    SingularityStatus singularity;
    /// First time the outermost cell holds non-vacuum density.
    std::optional<double> wall_contact_time;
    std::size_t steps = 0;
    /// Largest |sum(omega rho)(t) - sum(omega rho)(0)| / sum(omega rho)(0) seen over all steps.
    double max_mass_drift = 0.0;
    std::size_t positivity_violations = 0;
};

/// Advances `initial` until t_end or detection. Records every `record_every` steps,
/// at t_end and at the detection step.
[[nodiscard]] inline SimulationOutput simulate(const FluidState& initial, const RadialGrid& grid,
                                               const ModelParams& params, const SolverConfig& config, double n) {
    SimulationOutput out;
    FluidState state = initial;
    const double floor = vacuum_floor_fraction * max_density(state);
    apply_vacuum_floor(state, floor);
    const DetectionReference ref = make_detection_reference(state, grid, params);
    const double mass0 = discrete_mass(state, grid);

    out.series.push_back(record(state, grid, params, n, floor));
    auto touching_wall = [&](const FluidState& s) { return s.rho.back() > floor && s.rho.back() > 0.0; };
    if (touching_wall(state)) out.wall_contact_time = state.t;

    StepStats stats;
    double last_dt = 0.0;
    while (state.t < config.t_end) {
        double cfl_dt = 0.0;
        try {
            cfl_dt = compute_dt(state, grid, params, config);
        } catch (const Error&) {
            out.singularity = SingularityStatus::at(state.t, SingularityCause::nonfinite);
            break;
        }
        if (cfl_dt < config.dt_min) {
            out.singularity = SingularityStatus::at(state.t, SingularityCause::dt_collapse);
            break;
        }
        const double remaining = config.t_end - state.t;
        const bool last = cfl_dt >= remaining;
        const double dt = last ? remaining : cfl_dt;
        state = step(state, grid, params, dt, config.reconstruction, floor, &stats);
        if (last) state.t = config.t_end;
        last_dt = dt;
        ++out.steps;

        if (mass0 > 0.0) {
            const double drift = std::abs(discrete_mass(state, grid) - mass0) / mass0;
            if (std::isfinite(drift)) out.max_mass_drift = std::max(out.max_mass_drift, drift);
        }
        if (!out.wall_contact_time && touching_wall(state)) out.wall_contact_time = state.t;

        out.singularity = detect_singularity(state, ref, grid, config);
        if (out.singularity.triggered) {
            if (out.singularity.cause != SingularityCause::nonfinite) {
                out.series.push_back(record(state, grid, params, n, floor));
                out.series.back().dt = last_dt;
            }
            break;
        }
        if (out.steps % config.record_every == 0 || state.t >= config.t_end) {
            out.series.push_back(record(state, grid, params, n, floor));
            out.series.back().dt = last_dt;
        }
    }
    out.positivity_violations = stats.positivity_violations;
    out.final_state = std::move(state);
    return out;
}

struct RunResult {
    RunConfig config;
    ProfileSpec profile;
    HypothesisReport hypotheses;
    RiccatiBound bound;
    SimulationOutput sim;

    [[nodiscard]] bool aborted_nonfinite() const {
        return sim.singularity.cause == SingularityCause::nonfinite;
    }
};

/// Initial data, hypothesis check and Riccati bound for a validated config.
struct PreparedRun {
    ModelParams params;
    RadialGrid grid;
    ProfileSpec profile;
    FluidState initial;
    HypothesisReport hypotheses;
    RiccatiBound bound;
};

[[nodiscard]] inline PreparedRun prepare_run(const RunConfig& config) {
    if (auto violations = validate(config); !violations.empty()) throw ConfigError(std::move(violations));
    const ModelParams params = make_params(config);
    const RadialGrid grid = make_grid(config);
    const ProfileSpec profile = resolve_profile(config, grid);
    FluidState initial = build_profile(profile, grid);
    const HypothesisReport report = check_hypotheses(initial, grid, params, config.n);
    const RiccatiBound bound =
        with_initial_value(coefficients(params.N(), config.n, params.R(), report.M, params.force()), report.H0);
    return {params, grid, profile, std::move(initial), report, bound};
}

[[nodiscard]] inline RunResult run_simulation(const RunConfig& config) {
    PreparedRun prep = prepare_run(config);
    RunResult result{config, prep.profile, prep.hypotheses, prep.bound, {}};
    result.sim = simulate(prep.initial, prep.grid, prep.params, config.solver, config.n);
    return result;
}

} // namespace blowup
