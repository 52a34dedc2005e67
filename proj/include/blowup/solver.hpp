#pragma once

// Conservative finite-volume update of (rho, rho V) in N-dimensional radial
// symmetry: Rusanov fluxes, area-weighted faces, a well-balanced geometric
// pressure source and the self-consistent radial field.

#include "blowup/errors.hpp"
#include "blowup/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace blowup {

enum class Reconstruction { first_order, muscl_minmod };

[[nodiscard]] constexpr std::string_view to_string(Reconstruction r) noexcept {
    return r == Reconstruction::first_order ? "first-order" : "muscl-minmod";
}

struct BlowupThresholds {
    /// Trigger when max rho exceeds this multiple of the initial maximum.
    double density_ratio = 1e6;
    /// Trigger when max |dV/dr| exceeds this multiple of the initial gradient reference.
    double gradient_scale = 1e3;
};

struct SolverConfig {
    double cfl = 0.45;
    double t_end = 0.0;
    double dt_min = 1e-10;
    double dt_max = std::numeric_limits<double>::infinity();
    std::size_t record_every = 10;
    Reconstruction reconstruction = Reconstruction::first_order;
    BlowupThresholds blowup;
};

enum class SingularityCause { density_ratio, gradient_scale, dt_collapse, nonfinite };

[[nodiscard]] constexpr std::string_view to_string(SingularityCause c) noexcept {
    switch (c) {
    case SingularityCause::density_ratio: return "density-ratio";
    case SingularityCause::gradient_scale: return "gradient-scale";
    case SingularityCause::dt_collapse: return "dt-collapse";
    case SingularityCause::nonfinite: return "nonfinite";
    }
    return "unknown";
}

struct SingularityStatus {
    bool triggered = false;
    std::optional<double> time;
    std::optional<SingularityCause> cause;

    static SingularityStatus at(double t, SingularityCause c) { return {true, t, c}; }
};

/// CFL step, capped by sqrt(dr / max|Phi_r|) when the field is active and by dt_max.
[[nodiscard]] inline double compute_dt(const FluidState& state, const RadialGrid& grid, const ModelParams& params,
                                       const SolverConfig& config) {
    if (!is_finite(state)) throw Error(ErrorKind::nonfinite_state, "state contains non-finite values");
    double speed = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i)
        speed = std::max(speed, std::abs(state.V[i]) + sound_speed(state.rho[i], params));
    double dt = config.dt_max;
    if (speed > 0.0) dt = std::min(dt, config.cfl * grid.dr() / speed);
    if (params.delta() != 0) {
        double field = 0.0;
        for (double f : field_gradient(state, grid, params)) field = std::max(field, std::abs(f));
        if (field > 0.0) dt = std::min(dt, std::sqrt(grid.dr() / field));
    }
    return std::max(dt, 0.0);
}

struct StepStats {
    /// Cells whose density went negative before flooring.
    std::size_t positivity_violations = 0;
};

namespace detail {

struct Primitive {
    double rho;
    double V;
};

[[nodiscard]] inline double minmod(double a, double b) noexcept {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

struct FaceFlux {
    double mass;
    double momentum;
};

[[nodiscard]] inline FaceFlux rusanov(Primitive L, Primitive R, const ModelParams& params) {
    const double pL = pressure(L.rho, params);
    const double pR = pressure(R.rho, params);
    const double mL = L.rho * L.V;
    const double mR = R.rho * R.V;
    const double lambda =
        std::max(std::abs(L.V) + sound_speed(L.rho, params), std::abs(R.V) + sound_speed(R.rho, params));
    return {0.5 * (mL + mR) - 0.5 * lambda * (R.rho - L.rho),
            0.5 * (mL * L.V + pL + mR * R.V + pR) - 0.5 * lambda * (mR - mL)};
}

struct Rates {
    std::vector<double> rho;
    std::vector<double> momentum;
};

/// Time derivative of the conserved cell averages for the primitive state (rho, V).
[[nodiscard]] inline Rates rates(const std::vector<double>& rho, const std::vector<double>& V, const RadialGrid& grid,
                                 const ModelParams& params, Reconstruction recon) {
    const std::size_t n = grid.size();
    std::vector<double> rho_lo(rho), rho_hi(rho), v_lo(V), v_hi(V);
    if (recon == Reconstruction::muscl_minmod) {
        // Mirror ghosts: even density, odd velocity at both walls.
        for (std::size_t i = 0; i < n; ++i) {
            const double rho_m = i == 0 ? rho[0] : rho[i - 1];
            const double rho_p = i + 1 == n ? rho[n - 1] : rho[i + 1];
            const double v_m = i == 0 ? -V[0] : V[i - 1];
            const double v_p = i + 1 == n ? -V[n - 1] : V[i + 1];
            const double s_rho = minmod(rho[i] - rho_m, rho_p - rho[i]);
            const double s_v = minmod(V[i] - v_m, v_p - V[i]);
            rho_lo[i] = rho[i] - 0.5 * s_rho;
            rho_hi[i] = rho[i] + 0.5 * s_rho;
            v_lo[i] = V[i] - 0.5 * s_v;
            v_hi[i] = V[i] + 0.5 * s_v;
        }
    }

    std::vector<FaceFlux> flux(n + 1, FaceFlux{0.0, 0.0});
    if (grid.N() == 1) {
        const Primitive inner{rho_lo[0], v_lo[0]};
        flux[0] = rusanov({inner.rho, -inner.V}, inner, params);
        flux[0].mass = 0.0;
    }
    for (std::size_t f = 1; f < n; ++f)
        flux[f] = rusanov({rho_hi[f - 1], v_hi[f - 1]}, {rho_lo[f], v_lo[f]}, params);
    flux[n] = {0.0, pressure(rho[n - 1], params)};

    const auto area = grid.areas();
    const auto omega = grid.measures();
    const auto field = field_gradient(std::span<const double>(rho), grid, params);
    Rates out{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double p = pressure(rho[i], params);
        // Subtracting the cell pressure from both faces folds in P (A+ - A-) / omega exactly.
        out.rho[i] = -(area[i + 1] * flux[i + 1].mass - area[i] * flux[i].mass) / omega[i];
        out.momentum[i] = -(area[i + 1] * (flux[i + 1].momentum - p) - area[i] * (flux[i].momentum - p)) / omega[i] +
                          rho[i] * field[i];
    }
    return out;
}

inline void to_primitive(const std::vector<double>& rho, const std::vector<double>& momentum, double vacuum_floor,
                         FluidState& out, StepStats* stats) {
    for (std::size_t i = 0; i < rho.size(); ++i) {
        double r = rho[i];
        if (r < 0.0) {
            if (stats) ++stats->positivity_violations;
            r = 0.0;
        }
        out.rho[i] = r;
        out.V[i] = (r > vacuum_floor && r > 0.0) ? momentum[i] / r : 0.0;
    }
}

} // namespace detail

/// Zero the velocity wherever the density is at or below the vacuum floor.
inline void apply_vacuum_floor(FluidState& state, double vacuum_floor) {
    for (std::size_t i = 0; i < state.size(); ++i)
        if (!(state.rho[i] > vacuum_floor) || state.rho[i] <= 0.0) state.V[i] = 0.0;
}

/// One update of the radial system by dt. First-order reconstruction uses forward Euler;
/// muscl-minmod pairs with a two-stage SSP Runge-Kutta update.
[[nodiscard]] inline FluidState step(const FluidState& state, const RadialGrid& grid, const ModelParams& params,
                                     double dt, Reconstruction recon = Reconstruction::first_order,
                                     double vacuum_floor = 0.0, StepStats* stats = nullptr) {
    const std::size_t n = grid.size();
    if (state.size() != n) throw Error(ErrorKind::domain, "state does not match grid");

    std::vector<double> momentum(n);
    for (std::size_t i = 0; i < n; ++i) momentum[i] = state.rho[i] * state.V[i];

    const auto k1 = detail::rates(state.rho, state.V, grid, params, recon);
    std::vector<double> rho1(n), mom1(n);
    for (std::size_t i = 0; i < n; ++i) {
        rho1[i] = state.rho[i] + dt * k1.rho[i];
        mom1[i] = momentum[i] + dt * k1.momentum[i];
    }
    FluidState next(n, state.t + dt);
    detail::to_primitive(rho1, mom1, vacuum_floor, next, stats);
    if (recon == Reconstruction::first_order) return next;

    const auto k2 = detail::rates(next.rho, next.V, grid, params, recon);
    for (std::size_t i = 0; i < n; ++i) {
        const double m1 = next.rho[i] * next.V[i];
        rho1[i] = 0.5 * state.rho[i] + 0.5 * (next.rho[i] + dt * k2.rho[i]);
        mom1[i] = 0.5 * momentum[i] + 0.5 * (m1 + dt * k2.momentum[i]);
    }
    detail::to_primitive(rho1, mom1, vacuum_floor, next, stats);
    return next;
}

/// The gradient witness ignores faces next to cells below this fraction of the initial peak
/// density; the numerical vacuum front otherwise produces spurious velocity jumps.
inline constexpr double witness_density_fraction = 1e-6;

/// Initial-state scales that the blowup witnesses compare against.
struct DetectionReference {
    double initial_max_rho = 0.0;
    /// Initial max |dV/dr|, but never below (max|V| + max c) / domain radius. Zero disables the witness.
    double gradient = 0.0;
};

[[nodiscard]] inline DetectionReference make_detection_reference(const FluidState& initial, const RadialGrid& grid,
                                                                 const ModelParams& params) {
    DetectionReference ref;
    ref.initial_max_rho = max_density(initial);
    double speed = 0.0;
    for (std::size_t i = 0; i < initial.size(); ++i)
        speed = std::max(speed, std::abs(initial.V[i]) + sound_speed(initial.rho[i], params));
    ref.gradient = std::max(max_velocity_gradient(initial, grid, witness_density_fraction * ref.initial_max_rho),
                            speed / grid.domain_radius());
    return ref;
}

/// Heuristic singularity witness; `cfl_dt` is the unclipped step the solver would take next.
[[nodiscard]] inline SingularityStatus detect_singularity(const FluidState& state, const DetectionReference& ref,
                                                          const RadialGrid& grid, const SolverConfig& config,
                                                          std::optional<double> cfl_dt = std::nullopt) {
    if (!is_finite(state)) return SingularityStatus::at(state.t, SingularityCause::nonfinite);
    if (ref.initial_max_rho > 0.0 && max_density(state) > config.blowup.density_ratio * ref.initial_max_rho)
        return SingularityStatus::at(state.t, SingularityCause::density_ratio);
    if (ref.gradient > 0.0 &&
        max_velocity_gradient(state, grid, witness_density_fraction * ref.initial_max_rho) >
            config.blowup.gradient_scale * ref.gradient)
        return SingularityStatus::at(state.t, SingularityCause::gradient_scale);
    if (cfl_dt && *cfl_dt < config.dt_min) return SingularityStatus::at(state.t, SingularityCause::dt_collapse);
    return {};
}

} // namespace blowup
