#pragma once

// Compactly supported C^1 initial profiles, the weighted momentum functional
// and the initial-data threshold for attractive blowup.

#include "blowup/errors.hpp"
#include "blowup/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

namespace blowup {

enum class ProfileKind { poly_bump };

[[nodiscard]] constexpr std::string_view to_string(ProfileKind) noexcept { return "poly-bump"; }

struct ProfileSpec {
    ProfileKind kind = ProfileKind::poly_bump;
    double rho_center = 1.0;
    double v_amplitude = 0.0;
    double support_radius = 0.5;
};

namespace detail {
inline void require_positive_exponent(double n) {
    if (!(n > 0.0)) throw Error(ErrorKind::invalid_exponent, "weight exponent n must be > 0");
}

inline void require_attractive_exponent(int N, double n) {
    const double lower = std::max(N - 2, 0);
    if (!(n > lower))
        throw Error(ErrorKind::hypothesis_violation,
                    "weight exponent must satisfy n > max(N-2, 0) = " + std::to_string(N - 2 > 0 ? N - 2 : 0));
}
} // namespace detail

/// rho0 = rho_c (1 - x^2)^2 and V0 = v_c x (1 - x^2)^2 with x = r / R0, zero for r >= R0.
/// Both are C^1 with vanishing value and slope at the support edge.
[[nodiscard]] inline FluidState build_profile(const ProfileSpec& spec, const RadialGrid& grid) {
    if (!(spec.support_radius > 0.0) || spec.support_radius > grid.domain_radius())
        throw Error(ErrorKind::configuration, "support radius must lie in (0, domain radius]");
    if (!(spec.rho_center > 0.0)) throw Error(ErrorKind::configuration, "central density must be > 0");

    FluidState state(grid.size());
    const auto r = grid.centers();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = r[i] / spec.support_radius;
        if (x >= 1.0) continue;
        const double bump = (1.0 - x * x) * (1.0 - x * x);
        state.rho[i] = spec.rho_center * bump;
        state.V[i] = spec.v_amplitude * x * bump;
    }
    return state;
}

/// H = integral over [0, domain] of r^n V dr, midpoint rule.
[[nodiscard]] inline double functional_H(std::span<const double> V, const RadialGrid& grid, double n) {
    detail::require_positive_exponent(n);
    const auto r = grid.centers();
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sum += std::pow(r[i], n) * V[i];
    return sum * grid.dr();
}

[[nodiscard]] inline double functional_H(const FluidState& state, const RadialGrid& grid, double n) {
    return functional_H(std::span<const double>(state.V), grid, n);
}

/// sqrt(2 R^{2n-N+4} M / (n (n+1) (n-N+2))), defined for n > max(N-2, 0).
[[nodiscard]] inline double threshold(int N, double n, double R, double M) {
    if (N < 1) throw Error(ErrorKind::invalid_dimension, "N must be >= 1");
    detail::require_attractive_exponent(N, n);
    if (!(R > 0.0)) throw Error(ErrorKind::domain, "R must be > 0");
    if (!(M >= 0.0)) throw Error(ErrorKind::domain, "M must be >= 0");
    const double radicand = 2.0 * std::pow(R, 2.0 * n - N + 4.0) * M / (n * (n + 1.0) * (n - N + 2.0));
    return std::sqrt(radicand);
}

struct HypothesisReport {
    double n = 0.0;
    double H0 = 0.0;
    double threshold = 0.0;
    double M = 0.0;
    bool satisfied = false;
    double margin = 0.0;
};

/// Attractive forcing needs H0 above the mass threshold; repulsive and plain Euler need H0 > 0.
[[nodiscard]] inline HypothesisReport check_hypotheses(const FluidState& state, const RadialGrid& grid,
                                                       const ModelParams& params, double n) {
    detail::require_positive_exponent(n);
    HypothesisReport report;
    report.n = n;
    report.M = paper_mass(state, grid, params);
    if (params.force() == Force::attractive)
        report.threshold = threshold(params.N(), n, params.R(), report.M);
    report.H0 = functional_H(state, grid, n);
    report.satisfied = report.H0 > report.threshold;
    report.margin = report.H0 - report.threshold;
    return report;
}

/// H0 is linear in the amplitude, so one unit-amplitude evaluation fixes it.
[[nodiscard]] inline double solve_velocity_amplitude(const ProfileSpec& spec, const RadialGrid& grid, double n,
                                                     double target_H0) {
    ProfileSpec unit = spec;
    unit.v_amplitude = 1.0;
    const double unit_H = functional_H(build_profile(unit, grid), grid, n);
    if (unit_H == 0.0 || !std::isfinite(unit_H))
        throw Error(ErrorKind::unsolvable, "profile has zero unit-amplitude functional");
    return target_H0 / unit_H;
}

} // namespace blowup
