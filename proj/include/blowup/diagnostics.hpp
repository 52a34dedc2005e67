#pragma once

// Functionals tracked along a run and the Riccati residual check.

#include "blowup/errors.hpp"
#include "blowup/initial_data.hpp"
#include "blowup/model.hpp"
#include "blowup/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace blowup {

struct TimeSeriesRecord {
    double t = 0.0;
    /// Step that produced this record; 0 for the initial record.
    double dt = 0.0;
    double H = 0.0;
    double M_paper = 0.0;
    double mass_discrete = 0.0;
    double kinetic = 0.0;
    double internal = 0.0;
    /// Absent for N <= 2.
    std::optional<double> gravitational;
    double max_rho = 0.0;
    double max_absV = 0.0;
    double max_dVdr = 0.0;
    double support_edge = 0.0;
};

/// Phi at cell centres for N >= 3: inward trapezoidal integration of Phi_r from the
/// exterior value Phi(R) = -delta alpha(N) Mtilde R^{2-N} / (N-2).
[[nodiscard]] inline std::vector<double> potential(const FluidState& state, const RadialGrid& grid,
                                                   const ModelParams& params) {
    const int N = params.N();
    if (N < 3) throw Error(ErrorKind::invalid_dimension, "potential normalisation needs N >= 3");
    const std::size_t n = grid.size();
    const auto field = field_gradient(state, grid, params);
    const double R = grid.domain_radius();
    const double dr = grid.dr();
    const double outer = -params.delta() * alpha_constant(N) * radial_mass_integral(state, grid) *
                         std::pow(R, 2.0 - N) / (N - 2.0);
    std::vector<double> phi(n);
    phi[n - 1] = outer - 0.5 * dr * field[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) phi[i] = phi[i + 1] - 0.5 * dr * (field[i] + field[i + 1]);
    return phi;
}

[[nodiscard]] inline TimeSeriesRecord record(const FluidState& state, const RadialGrid& grid,
                                             const ModelParams& params, double n, double vacuum_floor = 0.0) {
    TimeSeriesRecord rec;
    rec.t = state.t;
    rec.H = functional_H(state, grid, n);
    rec.M_paper = paper_mass(state, grid, params);
    rec.mass_discrete = discrete_mass(state, grid);

    const int N = params.N();
    const double shell = N * unit_ball_volume(N) * grid.dr();
    const auto w = grid.center_weights();
    const bool has_internal = params.K() > 0.0 && params.gamma() > 1.0;
    double kinetic = 0.0, internal = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double rho = state.rho[i];
        kinetic += 0.5 * rho * state.V[i] * state.V[i] * w[i];
        if (has_internal) internal += params.K() / (params.gamma() - 1.0) * std::pow(rho, params.gamma()) * w[i];
        rec.max_rho = std::max(rec.max_rho, rho);
        rec.max_absV = std::max(rec.max_absV, std::abs(state.V[i]));
        if (rho > vacuum_floor && rho > 0.0) rec.support_edge = grid.centers()[i];
    }
    rec.kinetic = shell * kinetic;
    rec.internal = shell * internal;
    if (N >= 3) {
        double grav = 0.0;
        if (params.delta() != 0) {
            const auto phi = potential(state, grid, params);
            for (std::size_t i = 0; i < grid.size(); ++i) grav += 0.5 * state.rho[i] * phi[i] * w[i];
        }
        rec.gravitational = shell * grav;
    }
    rec.max_dVdr = max_velocity_gradient(state, grid, vacuum_floor);
    return rec;
}

struct ResidualSeries {
    std::vector<double> t;
    std::vector<double> dHdt;
    std::vector<double> rhs;
    std::vector<double> residual;

    [[nodiscard]] double min_residual() const {
        double m = std::numeric_limits<double>::infinity();
        for (double r : residual) m = std::min(m, r);
        return m;
    }
};

/// dH/dt - (a H^2 - b) at interior record times, with the three-point derivative
/// that stays second order on uneven spacing.
[[nodiscard]] inline ResidualSeries riccati_residual(std::span<const TimeSeriesRecord> series,
                                                     const RiccatiBound& bound) {
    if (series.size() < 3) throw Error(ErrorKind::insufficient_data, "residual needs at least 3 records");
    ResidualSeries out;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        const double h1 = series[i].t - series[i - 1].t;
        const double h2 = series[i + 1].t - series[i].t;
        if (!(h1 > 0.0) || !(h2 > 0.0)) throw Error(ErrorKind::insufficient_data, "record times must increase");
        const double deriv = (-h2 / (h1 * (h1 + h2))) * series[i - 1].H + ((h2 - h1) / (h1 * h2)) * series[i].H +
                             (h1 / (h2 * (h1 + h2))) * series[i + 1].H;
        const double rhs = bound.a * series[i].H * series[i].H - bound.b;
        out.t.push_back(series[i].t);
        out.dHdt.push_back(deriv);
        out.rhs.push_back(rhs);
        out.residual.push_back(deriv - rhs);
    }
    return out;
}

} // namespace blowup
