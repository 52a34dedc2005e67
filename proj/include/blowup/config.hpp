#pragma once

// Run configuration: the dotted-key text format, validation and rendering.
//
//   # comment
//   model.N = 3
//   model.delta = -1
//   profile.target_H0_multiplier = 2
//
// Every violation is collected before reporting, each tagged with its key path.

#include "blowup/errors.hpp"
#include "blowup/initial_data.hpp"
#include "blowup/model.hpp"
#include "blowup/solver.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

namespace blowup {

struct RunConfig {
    struct Model {
        int N = 3;
        int delta = 0;
        double K = 0.0;
        double gamma = 1.4;
        double R = 1.0;
        bool operator==(const Model&) const = default;
    } model;

    struct Grid {
        std::size_t cells = 400;
        /// Defaults to model.R; the solid wall sits here.
        double domain_radius = 1.0;
        bool operator==(const Grid&) const = default;
    } grid;

    struct Profile {
        ProfileKind kind = ProfileKind::poly_bump;
        double rho_center = 1.0;
        double support_radius = 0.5;
        std::optional<double> v_amplitude;
        std::optional<double> target_H0_multiplier;
        bool operator==(const Profile&) const = default;
    } profile;

    SolverConfig solver;
    double n = 1.0;
    std::string output_dir = "out";

    bool operator==(const RunConfig& o) const {
        const auto& a = solver;
        const auto& b = o.solver;
        return model == o.model && grid == o.grid && profile == o.profile && n == o.n &&
               output_dir == o.output_dir && a.cfl == b.cfl && a.t_end == b.t_end && a.dt_min == b.dt_min &&
               a.dt_max == b.dt_max && a.record_every == b.record_every && a.reconstruction == b.reconstruction &&
               a.blowup.density_ratio == b.blowup.density_ratio && a.blowup.gradient_scale == b.blowup.gradient_scale;
    }
};

struct ConfigEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
    return value;
}

inline std::optional<long long> parse_integer(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    long long value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
    return value;
}

} // namespace detail

/// Shortest representation that parses back to the same double.
[[nodiscard]] inline std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[40];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (detail::parse_double(buf) == x) break;
    }
    return buf;
}

/// Splits a document into entries; syntax problems and duplicate keys go to `violations`.
[[nodiscard]] inline std::vector<ConfigEntry> parse_entries(std::string_view text,
                                                           std::vector<std::string>& violations) {
    std::vector<ConfigEntry> entries;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            violations.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
            continue;
        }
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        if (key.empty()) {
            violations.push_back("line " + std::to_string(line_no) + ": empty key");
            continue;
        }
        if (!seen.insert(key).second) {
            violations.push_back(key + ": duplicate key (line " + std::to_string(line_no) + ")");
            continue;
        }
        entries.push_back({key, value, line_no});
    }
    return entries;
}

/// Key paths accepted in a run document, in rendering order.
inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "model.N",
        "model.delta",
        "model.K",
        "model.gamma",
        "model.R",
        "grid.cells",
        "grid.domain_radius",
        "profile.kind",
        "profile.rho_center",
        "profile.support_radius",
        "profile.v_amplitude",
        "profile.target_H0_multiplier",
        "solver.cfl",
        "solver.t_end",
        "solver.dt_min",
        "solver.dt_max",
        "solver.record_every",
        "solver.reconstruction",
        "solver.blowup.density_ratio",
        "solver.blowup.gradient_scale",
        "diagnostics.n",
        "output.dir",
    };
    return keys;
}

inline const std::set<std::string>& required_config_keys() {
    static const std::set<std::string> keys = {
        "model.N",     "model.delta",        "model.K",                "model.gamma",  "model.R",
        "grid.cells",  "profile.rho_center", "profile.support_radius", "solver.t_end", "diagnostics.n",
    };
    return keys;
}

/// Every module precondition a run relies on, checked up front.
[[nodiscard]] inline std::vector<std::string> validate(const RunConfig& c) {
    std::vector<std::string> v;
    const auto& m = c.model;
    if (m.N < 1) v.push_back("model.N: must be >= 1");
    if (m.delta < -1 || m.delta > 1) v.push_back("model.delta: must be -1, 0 or 1");
    if (!(m.K >= 0.0)) v.push_back("model.K: must be >= 0");
    if (m.K > 0.0 && !(m.gamma > 1.0)) v.push_back("model.gamma: must exceed 1 when model.K > 0");
    if (!(m.R > 0.0)) v.push_back("model.R: must be > 0");

    if (c.grid.cells < RadialGrid::min_cells) v.push_back("grid.cells: must be >= 8");
    if (!(c.grid.domain_radius > 0.0)) v.push_back("grid.domain_radius: must be > 0");
    else if (m.R > 0.0 && c.grid.domain_radius < m.R) v.push_back("grid.domain_radius: must be >= model.R");

    const auto& p = c.profile;
    if (!(p.rho_center > 0.0)) v.push_back("profile.rho_center: must be > 0");
    if (!(p.support_radius > 0.0)) v.push_back("profile.support_radius: must be > 0");
    else {
        if (!(p.support_radius < c.grid.domain_radius))
            v.push_back("profile.support_radius: must be strictly inside the domain (< grid.domain_radius)");
        if (p.support_radius > m.R) v.push_back("profile.support_radius: must be <= model.R");
    }
    if (p.v_amplitude.has_value() == p.target_H0_multiplier.has_value())
        v.push_back("profile: exactly one of profile.v_amplitude and profile.target_H0_multiplier is required");
    if (p.v_amplitude && !std::isfinite(*p.v_amplitude)) v.push_back("profile.v_amplitude: must be finite");
    if (p.target_H0_multiplier) {
        if (!std::isfinite(*p.target_H0_multiplier))
            v.push_back("profile.target_H0_multiplier: must be finite");
        if (m.delta != -1)
            v.push_back("profile.target_H0_multiplier: needs model.delta = -1 (the threshold is zero otherwise)");
    }

    const auto& s = c.solver;
    if (!(s.cfl > 0.0 && s.cfl < 1.0)) v.push_back("solver.cfl: must lie in (0, 1)");
    if (!(s.t_end >= 0.0) || !std::isfinite(s.t_end)) v.push_back("solver.t_end: must be finite and >= 0");
    if (!(s.dt_min > 0.0)) v.push_back("solver.dt_min: must be > 0");
    if (!(s.dt_max > 0.0)) v.push_back("solver.dt_max: must be > 0");
    if (s.record_every < 1) v.push_back("solver.record_every: must be >= 1");
    if (!(s.blowup.density_ratio > 1.0)) v.push_back("solver.blowup.density_ratio: must exceed 1");
    if (!(s.blowup.gradient_scale > 0.0)) v.push_back("solver.blowup.gradient_scale: must be > 0");

    if (!(c.n > 0.0)) v.push_back("diagnostics.n: must be > 0");
    else if (m.delta == -1 && !(c.n > std::max(m.N - 2, 0)))
        v.push_back("diagnostics.n: attractive blowup requires n > max(N-2, 0) = " +
                    std::to_string(std::max(m.N - 2, 0)));

    if (c.output_dir.empty()) v.push_back("output.dir: must not be empty");

    if (v.empty()) {
        try {
            const RadialGrid grid(m.N, c.grid.cells, c.grid.domain_radius);
            ProfileSpec spec{p.kind, p.rho_center, 1.0, p.support_radius};
            (void)solve_velocity_amplitude(spec, grid, c.n, 1.0);
        } catch (const Error& e) {
            v.push_back(std::string("profile: ") + e.what());
        }
    }
    return v;
}

/// Builds a validated config from entries; throws ConfigError listing every problem.
[[nodiscard]] inline RunConfig config_from_entries(const std::vector<ConfigEntry>& entries,
                                                   std::vector<std::string> violations = {}) {
    RunConfig c;
    const std::set<std::string> known(config_keys().begin(), config_keys().end());
    std::set<std::string> present;
    bool domain_given = false;

    auto bad = [&](const ConfigEntry& e, const std::string& what) {
        violations.push_back(e.key + ": " + what + " (line " + std::to_string(e.line) + ")");
    };
    auto real = [&](const ConfigEntry& e, double& out) {
        if (auto x = detail::parse_double(e.value)) out = *x;
        else bad(e, "expected a number, got '" + e.value + "'");
    };
    auto opt_real = [&](const ConfigEntry& e, std::optional<double>& out) {
        double x = 0.0;
        if (auto parsed = detail::parse_double(e.value)) {
            x = *parsed;
            out = x;
        } else {
            bad(e, "expected a number, got '" + e.value + "'");
        }
    };
    auto integer = [&](const ConfigEntry& e, auto& out, long long lo) {
        if (auto x = detail::parse_integer(e.value); x && *x >= lo) out = static_cast<std::decay_t<decltype(out)>>(*x);
        else bad(e, "expected an integer >= " + std::to_string(lo) + ", got '" + e.value + "'");
    };

    for (const auto& e : entries) {
        if (!known.count(e.key)) {
            bad(e, "unknown key");
            continue;
        }
        present.insert(e.key);
        const auto& k = e.key;
        if (k == "model.N") integer(e, c.model.N, -1000000);
        else if (k == "model.delta") integer(e, c.model.delta, -1000000);
        else if (k == "model.K") real(e, c.model.K);
        else if (k == "model.gamma") real(e, c.model.gamma);
        else if (k == "model.R") real(e, c.model.R);
        else if (k == "grid.cells") integer(e, c.grid.cells, 0);
        else if (k == "grid.domain_radius") {
            real(e, c.grid.domain_radius);
            domain_given = true;
        } else if (k == "profile.kind") {
            if (e.value != "poly-bump") bad(e, "unknown profile kind '" + e.value + "' (expected poly-bump)");
        } else if (k == "profile.rho_center") real(e, c.profile.rho_center);
        else if (k == "profile.support_radius") real(e, c.profile.support_radius);
        else if (k == "profile.v_amplitude") opt_real(e, c.profile.v_amplitude);
        else if (k == "profile.target_H0_multiplier") opt_real(e, c.profile.target_H0_multiplier);
        else if (k == "solver.cfl") real(e, c.solver.cfl);
        else if (k == "solver.t_end") real(e, c.solver.t_end);
        else if (k == "solver.dt_min") real(e, c.solver.dt_min);
        else if (k == "solver.dt_max") real(e, c.solver.dt_max);
        else if (k == "solver.record_every") integer(e, c.solver.record_every, 1);
        else if (k == "solver.reconstruction") {
            if (e.value == "first-order") c.solver.reconstruction = Reconstruction::first_order;
            else if (e.value == "muscl-minmod") c.solver.reconstruction = Reconstruction::muscl_minmod;
            else bad(e, "expected first-order or muscl-minmod, got '" + e.value + "'");
        } else if (k == "solver.blowup.density_ratio") real(e, c.solver.blowup.density_ratio);
        else if (k == "solver.blowup.gradient_scale") real(e, c.solver.blowup.gradient_scale);
        else if (k == "diagnostics.n") real(e, c.n);
        else if (k == "output.dir") c.output_dir = e.value;
    }
    for (const auto& k : required_config_keys())
        if (!present.count(k)) violations.push_back(k + ": missing required key");
    if (!domain_given) c.grid.domain_radius = c.model.R;

    for (auto& v : validate(c)) violations.push_back(std::move(v));
    if (!violations.empty()) throw ConfigError(std::move(violations));
    return c;
}

[[nodiscard]] inline RunConfig parse_config(std::string_view text) {
    std::vector<std::string> violations;
    auto entries = parse_entries(text, violations);
    return config_from_entries(entries, std::move(violations));
}

/// Canonical echo of a config; parse_config(render_config(c)) == c.
[[nodiscard]] inline std::string render_config(const RunConfig& c) {
    std::ostringstream out;
    auto line = [&](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
    line("model.N", std::to_string(c.model.N));
    line("model.delta", std::to_string(c.model.delta));
    line("model.K", format_double(c.model.K));
    line("model.gamma", format_double(c.model.gamma));
    line("model.R", format_double(c.model.R));
    line("grid.cells", std::to_string(c.grid.cells));
    line("grid.domain_radius", format_double(c.grid.domain_radius));
    line("profile.kind", std::string(to_string(c.profile.kind)));
    line("profile.rho_center", format_double(c.profile.rho_center));
    line("profile.support_radius", format_double(c.profile.support_radius));
    if (c.profile.v_amplitude) line("profile.v_amplitude", format_double(*c.profile.v_amplitude));
    if (c.profile.target_H0_multiplier)
        line("profile.target_H0_multiplier", format_double(*c.profile.target_H0_multiplier));
    line("solver.cfl", format_double(c.solver.cfl));
    line("solver.t_end", format_double(c.solver.t_end));
    line("solver.dt_min", format_double(c.solver.dt_min));
    line("solver.dt_max", format_double(c.solver.dt_max));
    line("solver.record_every", std::to_string(c.solver.record_every));
    line("solver.reconstruction", std::string(to_string(c.solver.reconstruction)));
    line("solver.blowup.density_ratio", format_double(c.solver.blowup.density_ratio));
    line("solver.blowup.gradient_scale", format_double(c.solver.blowup.gradient_scale));
    line("diagnostics.n", format_double(c.n));
    line("output.dir", c.output_dir);
    return out.str();
}

[[nodiscard]] inline ModelParams make_params(const RunConfig& c) {
    return ModelParams(c.model.N, c.model.delta, c.model.K, c.model.gamma, c.model.R);
}

[[nodiscard]] inline RadialGrid make_grid(const RunConfig& c) {
    return RadialGrid(c.model.N, c.grid.cells, c.grid.domain_radius);
}

/// The profile with its velocity amplitude resolved (solving for it when a threshold multiple is given).
[[nodiscard]] inline ProfileSpec resolve_profile(const RunConfig& c, const RadialGrid& grid) {
    ProfileSpec spec{c.profile.kind, c.profile.rho_center, 0.0, c.profile.support_radius};
    if (c.profile.v_amplitude) {
        spec.v_amplitude = *c.profile.v_amplitude;
        return spec;
    }
    const double M = paper_mass(build_profile(spec, grid), grid, make_params(c));
    const double target = *c.profile.target_H0_multiplier * threshold(c.model.N, c.n, c.model.R, M);
    spec.v_amplitude = solve_velocity_amplitude(spec, grid, c.n, target);
    return spec;
}

} // namespace blowup
