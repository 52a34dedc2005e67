#pragma once

// Riccati comparison machinery for H' >= a H^2 - b: coefficients, the exact
// comparison solution and its pole, an RK4 oracle and the Emden boundary ODE.

#include "blowup/errors.hpp"
#include "blowup/initial_data.hpp"
#include "blowup/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace blowup {

struct RiccatiBound {
    double a = 0.0;
    double b = 0.0;
    double beta = 0.0;
    double H0 = 0.0;
    std::optional<double> T_star;
};

/// a = n(n+1) / (2 R^{n+2});  b = R^{n-N+2} M / (n-N+2) for attractive forcing, else 0.
[[nodiscard]] inline RiccatiBound coefficients(int N, double n, double R, double M, Force force) {
    detail::require_positive_exponent(n);
    if (!(R > 0.0)) throw Error(ErrorKind::domain, "R must be > 0");
    if (!(M >= 0.0)) throw Error(ErrorKind::domain, "M must be >= 0");
    RiccatiBound bound;
    bound.a = n * (n + 1.0) / (2.0 * std::pow(R, n + 2.0));
    if (force == Force::attractive) {
        detail::require_attractive_exponent(N, n);
        bound.b = std::pow(R, n - N + 2.0) * M / (n - N + 2.0);
    }
    bound.beta = std::sqrt(bound.b / bound.a);
    return bound;
}

/// Pole of the comparison solution; none unless H0 > beta.
[[nodiscard]] inline std::optional<double> blowup_time(const RiccatiBound& bound) {
    if (!(bound.H0 > bound.beta)) return std::nullopt;
    if (bound.b == 0.0) return 1.0 / (bound.a * bound.H0);
    const double rate = 2.0 * std::sqrt(bound.a * bound.b);
    return std::log((bound.H0 + bound.beta) / (bound.H0 - bound.beta)) / rate;
}

[[nodiscard]] inline RiccatiBound with_initial_value(RiccatiBound bound, double H0) {
    bound.H0 = H0;
    bound.T_star = blowup_time(bound);
    return bound;
}

/// Exact solution of H' = a H^2 - b through H(0) = H0, valid for 0 <= t < T*.
[[nodiscard]] inline double comparison_solution(const RiccatiBound& bound, double t) {
    const auto pole = blowup_time(bound);
    if (!pole) throw Error(ErrorKind::no_blowup, "H0 does not exceed the equilibrium beta");
    if (t >= *pole) throw Error(ErrorKind::past_pole, "t lies at or beyond the blowup time");
    if (bound.b == 0.0) return bound.H0 / (1.0 - bound.a * bound.H0 * t);
    const double u0 = (bound.H0 - bound.beta) / (bound.H0 + bound.beta);
    const double u = u0 * std::exp(2.0 * std::sqrt(bound.a * bound.b) * t);
    return bound.beta * (1.0 + u) / (1.0 - u);
}

enum class RiccatiHalt { reached_t_max, magnitude_cap, nonfinite };

struct RiccatiSeries {
    std::vector<double> t;
    std::vector<double> H;
    double last_valid_time = 0.0;
    RiccatiHalt halt = RiccatiHalt::reached_t_max;
    /// First time H crosses the divergence level, linearly interpolated between steps.
    std::optional<double> divergence_time;
};

inline constexpr double riccati_magnitude_cap = 1e12;

/// Classical RK4 for H' = a H^2 - b. Keeps every `stride`-th sample and the last valid one.
[[nodiscard]] inline RiccatiSeries integrate_riccati_numeric(double a, double b, double H0, double t_max, double dt,
                                                             double divergence_level = 1e6,
                                                             std::size_t stride = 1) {
    if (!(dt > 0.0)) throw Error(ErrorKind::domain, "dt must be > 0");
    if (stride == 0) stride = 1;
    const auto rhs = [a, b](double h) { return a * h * h - b; };

    RiccatiSeries out;
    double t = 0.0;
    double h = H0;
    out.t.push_back(t);
    out.H.push_back(h);
    if (h > divergence_level) out.divergence_time = 0.0;

    std::size_t steps = 0;
    while (t < t_max) {
        const double step = std::min(dt, t_max - t);
        const double k1 = rhs(h);
        const double k2 = rhs(h + 0.5 * step * k1);
        const double k3 = rhs(h + 0.5 * step * k2);
        const double k4 = rhs(h + step * k3);
        const double next = h + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(next)) {
            out.halt = RiccatiHalt::nonfinite;
            break;
        }
        const double t_next = (step == t_max - t) ? t_max : t + step;
        if (!out.divergence_time && next > divergence_level)
            out.divergence_time = t + step * (divergence_level - h) / (next - h);
        if (std::abs(next) > riccati_magnitude_cap) {
            out.halt = RiccatiHalt::magnitude_cap;
            break;
        }
        t = t_next;
        h = next;
        if (++steps % stride == 0 || t >= t_max) {
            out.t.push_back(t);
            out.H.push_back(h);
        }
    }
    if (out.t.back() != t) {
        out.t.push_back(t);
        out.H.push_back(h);
    }
    out.last_valid_time = t;
    return out;
}

/// Linear interpolation of a sampled series; t must lie in its range.
[[nodiscard]] inline double sample_at(const RiccatiSeries& series, double t) {
    const auto& ts = series.t;
    if (ts.empty() || t < ts.front() || t > ts.back())
        throw Error(ErrorKind::domain, "time outside the sampled range");
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    if (it == ts.end()) return series.H.back();
    const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return series.H[lo] + w * (series.H[hi] - series.H[lo]);
}

struct EmdenTrajectory {
    std::vector<double> t;
    std::vector<double> radius;
    std::vector<double> speed;
};

/// Support-boundary motion R'' = delta M / R^{N-1} from rest at R0, by RK4.
/// The trajectory stops before R would fall to `min_radius` (default: the origin).
[[nodiscard]] inline EmdenTrajectory emden_boundary(Force force, double M, int N, double R0, double t_max, double dt,
                                                    double min_radius = 0.0) {
    if (!(R0 > 0.0)) throw Error(ErrorKind::domain, "R0 must be > 0");
    if (!(dt > 0.0)) throw Error(ErrorKind::domain, "dt must be > 0");
    if (N < 1) throw Error(ErrorKind::invalid_dimension, "N must be >= 1");
    const double strength = sign_of(force) * M;
    const auto accel = [strength, N](double r) { return strength / std::pow(r, N - 1); };

    EmdenTrajectory out;
    double t = 0.0, r = R0, v = 0.0;
    out.t.push_back(t);
    out.radius.push_back(r);
    out.speed.push_back(v);
    while (t < t_max) {
        const double h = std::min(dt, t_max - t);
        const double k1r = v, k1v = accel(r);
        const double r2 = r + 0.5 * h * k1r;
        if (r2 <= min_radius) break;
        const double k2r = v + 0.5 * h * k1v, k2v = accel(r2);
        const double r3 = r + 0.5 * h * k2r;
        if (r3 <= min_radius) break;
        const double k3r = v + 0.5 * h * k2v, k3v = accel(r3);
        const double r4 = r + h * k3r;
        if (r4 <= min_radius) break;
        const double k4r = v + h * k3v, k4v = accel(r4);
        const double r_next = r + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
        const double v_next = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!(r_next > min_radius) || !std::isfinite(v_next)) break;
        t = (h == t_max - t) ? t_max : t + h;
        r = r_next;
        v = v_next;
        out.t.push_back(t);
        out.radius.push_back(r);
        out.speed.push_back(v);
    }
    return out;
}

/// First integral of the Emden ODE: R'^2/2 minus the potential of delta M / R^{N-1}.
[[nodiscard]] inline double emden_energy(Force force, double M, int N, double radius, double speed) {
    const double strength = sign_of(force) * M;
    const double potential = N == 2 ? std::log(radius) : std::pow(radius, 2.0 - N) / (2.0 - N);
    return 0.5 * speed * speed - strength * potential;
}

} // namespace blowup
