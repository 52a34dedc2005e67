#pragma once

// Physics types shared by every module: model parameters, the radial grid,
// the fluid state, the gamma-law closure and the reduced radial Poisson field.

#include "blowup/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace blowup {

/// Sign of the potential force: attractive (gaseous stars), none (plain Euler), repulsive.
enum class Force : int { attractive = -1, none = 0, repulsive = 1 };

[[nodiscard]] constexpr int sign_of(Force f) noexcept { return static_cast<int>(f); }

[[nodiscard]] inline Force force_from_int(int delta) {
    if (delta < -1 || delta > 1)
        throw Error(ErrorKind::domain, "delta must be -1, 0 or +1, got " + std::to_string(delta));
    return static_cast<Force>(delta);
}

class ModelParams {
public:
    ModelParams(int dimension, Force force, double K, double gamma, double support_radius)
        : N_(dimension), force_(force), K_(K), gamma_(gamma), R_(support_radius) {
        if (N_ < 1) throw Error(ErrorKind::invalid_dimension, "N must be >= 1");
        if (!(K_ >= 0.0)) throw Error(ErrorKind::domain, "K must be >= 0");
        if (K_ > 0.0 && !(gamma_ > 1.0))
            throw Error(ErrorKind::domain, "gamma must exceed 1 when K > 0");
        if (!(R_ > 0.0)) throw Error(ErrorKind::domain, "R must be > 0");
    }

    ModelParams(int dimension, int delta, double K, double gamma, double support_radius)
        : ModelParams(dimension, force_from_int(delta), K, gamma, support_radius) {}

    [[nodiscard]] int N() const noexcept { return N_; }
    [[nodiscard]] Force force() const noexcept { return force_; }
    [[nodiscard]] int delta() const noexcept { return sign_of(force_); }
    [[nodiscard]] double K() const noexcept { return K_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] double R() const noexcept { return R_; }
    [[nodiscard]] bool pressureless() const noexcept { return K_ == 0.0; }

private:
    int N_;
    Force force_;
    double K_;
    double gamma_;
    double R_;
};

/// Uniform cell-centred discretisation of [0, domain_radius] in N-dimensional radial symmetry.
class RadialGrid {
public:
    static constexpr std::size_t min_cells = 8;

    RadialGrid(int dimension, std::size_t cell_count, double domain_radius)
        : N_(dimension), cells_(cell_count), radius_(domain_radius) {
        if (N_ < 1) throw Error(ErrorKind::invalid_dimension, "N must be >= 1");
        if (cells_ < min_cells)
            throw Error(ErrorKind::configuration, "grid needs at least 8 cells");
        if (!(radius_ > 0.0)) throw Error(ErrorKind::configuration, "domain radius must be > 0");
        dr_ = radius_ / static_cast<double>(cells_);

        faces_.resize(cells_ + 1);
        areas_.resize(cells_ + 1);
        for (std::size_t i = 0; i <= cells_; ++i) {
            faces_[i] = static_cast<double>(i) * dr_;
            areas_[i] = std::pow(faces_[i], N_ - 1);
        }
        faces_[cells_] = radius_;
        areas_[cells_] = std::pow(radius_, N_ - 1);

        centers_.resize(cells_);
        weights_.resize(cells_);
        measures_.resize(cells_);
        for (std::size_t i = 0; i < cells_; ++i) {
            centers_[i] = (static_cast<double>(i) + 0.5) * dr_;
            weights_[i] = std::pow(centers_[i], N_ - 1);
            measures_[i] = (std::pow(faces_[i + 1], N_) - std::pow(faces_[i], N_)) / N_;
        }
    }

    [[nodiscard]] int N() const noexcept { return N_; }
    [[nodiscard]] std::size_t size() const noexcept { return cells_; }
    [[nodiscard]] double domain_radius() const noexcept { return radius_; }
    [[nodiscard]] double dr() const noexcept { return dr_; }

    /// Face positions r_{i+1/2}, i = 0..size().
    [[nodiscard]] std::span<const double> faces() const noexcept { return faces_; }
    /// Face areas r^{N-1}; zero at the axis for N >= 2.
    [[nodiscard]] std::span<const double> areas() const noexcept { return areas_; }
    [[nodiscard]] std::span<const double> centers() const noexcept { return centers_; }
    /// r_i^{N-1} at cell centres (midpoint quadrature weight per unit dr).
    [[nodiscard]] std::span<const double> center_weights() const noexcept { return weights_; }
    /// Cell measures (r_{i+1/2}^N - r_{i-1/2}^N) / N.
    [[nodiscard]] std::span<const double> measures() const noexcept { return measures_; }

private:
    int N_;
    std::size_t cells_;
    double radius_;
    double dr_{};
    std::vector<double> faces_;
    std::vector<double> areas_;
    std::vector<double> centers_;
    std::vector<double> weights_;
    std::vector<double> measures_;
};

struct FluidState {
    double t = 0.0;
    std::vector<double> rho;
    std::vector<double> V;

    FluidState() = default;
    explicit FluidState(std::size_t cells, double time = 0.0) : t(time), rho(cells, 0.0), V(cells, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return rho.size(); }
};

/// Density below this fraction of the initial maximum is treated as vacuum.
inline constexpr double vacuum_floor_fraction = 1e-14;

[[nodiscard]] inline double max_density(const FluidState& state) {
    double m = 0.0;
    for (double r : state.rho) m = std::max(m, r);
    return m;
}

[[nodiscard]] inline bool is_finite(const FluidState& state) {
    auto finite = [](double x) { return std::isfinite(x); };
    return std::isfinite(state.t) && std::all_of(state.rho.begin(), state.rho.end(), finite) &&
           std::all_of(state.V.begin(), state.V.end(), finite);
}

/// Largest |V_{i+1} - V_i| / dr over interior faces whose two cells both exceed `density_cutoff`.
[[nodiscard]] inline double max_velocity_gradient(const FluidState& state, const RadialGrid& grid,
                                                  double density_cutoff = 0.0) {
    double g = 0.0;
    for (std::size_t i = 1; i < state.V.size(); ++i) {
        if (!(state.rho[i] > density_cutoff && state.rho[i - 1] > density_cutoff)) continue;
        g = std::max(g, std::abs(state.V[i] - state.V[i - 1]));
    }
    return g / grid.dr();
}

/// Volume of the unit ball in R^N.
[[nodiscard]] inline double unit_ball_volume(int N) {
    if (N < 1) throw Error(ErrorKind::invalid_dimension, "N must be >= 1");
    return std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
}

/// The Poisson normalisation alpha(N): 1, 2*pi, then N(N-2) Vol(N) for N >= 3.
[[nodiscard]] inline double alpha_constant(int N) {
    if (N < 1) throw Error(ErrorKind::invalid_dimension, "N must be >= 1, got " + std::to_string(N));
    if (N == 1) return 1.0;
    if (N == 2) return 2.0 * std::numbers::pi;
    return N * (N - 2) * unit_ball_volume(N);
}

[[nodiscard]] inline double pressure(double rho, const ModelParams& params) {
    if (rho < 0.0) throw Error(ErrorKind::domain, "negative density in pressure");
    if (params.pressureless() || rho == 0.0) return 0.0;
    return params.K() * std::pow(rho, params.gamma());
}

[[nodiscard]] inline double sound_speed(double rho, const ModelParams& params) {
    if (params.pressureless() || rho <= 0.0) return 0.0;
    return std::sqrt(params.K() * params.gamma() * std::pow(rho, params.gamma() - 1.0));
}

/// Phi_r at cell centres from the cumulative midpoint rule with a half-cell correction.
[[nodiscard]] inline std::vector<double> field_gradient(std::span<const double> rho, const RadialGrid& grid,
                                                        const ModelParams& params) {
    std::vector<double> field(grid.size(), 0.0);
    const int delta = params.delta();
    if (delta == 0) return field;
    const double scale = delta * alpha_constant(params.N());
    const double dr = grid.dr();
    const auto w = grid.center_weights();
    double below = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double own = rho[i] * w[i] * dr;
        field[i] = scale * (below + 0.5 * own) / w[i];
        below += own;
    }
    return field;
}

[[nodiscard]] inline std::vector<double> field_gradient(const FluidState& state, const RadialGrid& grid,
                                                        const ModelParams& params) {
    return field_gradient(std::span<const double>(state.rho), grid, params);
}

/// Midpoint sum of rho r^{N-1} dr, without the alpha(N) factor.
[[nodiscard]] inline double radial_mass_integral(const FluidState& state, const RadialGrid& grid) {
    const auto w = grid.center_weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sum += state.rho[i] * w[i];
    return sum * grid.dr();
}

/// M = alpha(N) * integral of rho s^{N-1} ds, the mass constant of the blowup estimates.
[[nodiscard]] inline double paper_mass(const FluidState& state, const RadialGrid& grid, const ModelParams& params) {
    return alpha_constant(params.N()) * radial_mass_integral(state, grid);
}

/// Sum of omega_i rho_i: the quantity the finite-volume update conserves exactly.
[[nodiscard]] inline double discrete_mass(const FluidState& state, const RadialGrid& grid) {
    const auto w = grid.measures();
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sum += w[i] * state.rho[i];
    return sum;
}

} // namespace blowup
