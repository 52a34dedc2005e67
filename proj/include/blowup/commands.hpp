#pragma once

// Subcommand bodies behind the `blowup` executable. Each returns the process exit
// status: 0 success (a detected blowup is a success), 1 configuration error,
// 2 non-finite abort.

#include "blowup/config.hpp"
#include "blowup/errors.hpp"
#include "blowup/initial_data.hpp"
#include "blowup/io.hpp"
#include "blowup/riccati.hpp"
#include "blowup/run.hpp"
#include "blowup/svg_plot.hpp"
#include "blowup/sweep.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace blowup {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_nonfinite = 2 };

namespace detail {

inline std::optional<std::string> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void report_config_error(std::ostream& err, const ConfigError& e) {
    err << "configuration error:\n";
    for (const auto& v : e.violations()) err << "  " << v << '\n';
}

inline std::optional<RunConfig> load_config(const std::string& path, std::ostream& err) {
    const auto text = slurp(path);
    if (!text) {
        err << "configuration error: cannot read " << path << '\n';
        return std::nullopt;
    }
    try {
        return parse_config(*text);
    } catch (const ConfigError& e) {
        report_config_error(err, e);
        return std::nullopt;
    }
}

inline bool write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    return static_cast<bool>(out);
}

inline void write_run_artifacts(const std::filesystem::path& dir, const RunResult& result) {
    std::filesystem::create_directories(dir);
    std::ostringstream series, summary;
    write_series_csv(series, result.sim.series);
    write_summary(summary, result);
    if (!write_file(dir / "series.csv", series.str()) || !write_file(dir / "summary.txt", summary.str()) ||
        !write_file(dir / "config.txt", render_config(result.config)))
        throw Error(ErrorKind::io, "cannot write run artifacts to " + dir.string());
}

} // namespace detail

/// Runs a validated config and writes series.csv, summary.txt and config.txt into `dir`.
inline int run_and_write(const RunConfig& config, const std::filesystem::path& dir, std::ostream& out) {
    const RunResult result = run_simulation(config);
    detail::write_run_artifacts(dir, result);

    const auto& s = result.sim.singularity;
    out << "H0 = " << format_double(result.hypotheses.H0) << "\n"
        << "threshold = " << format_double(result.hypotheses.threshold) << "\n"
        << "hypotheses satisfied = " << (result.hypotheses.satisfied ? "true" : "false") << "\n"
        << "T_star = " << format_optional(result.bound.T_star) << "\n";
    if (s.triggered) {
        out << "singularity detected at t = " << format_double(*s.time) << " (" << to_string(*s.cause) << ")";
        if (result.bound.T_star) out << ", t / T_star = " << format_double(*s.time / *result.bound.T_star);
        out << "\n";
    } else {
        out << "no singularity detected up to t = " << format_double(result.sim.final_state.t) << "\n";
    }
    out << "artifacts written to " << dir.string() << "\n";
    return result.aborted_nonfinite() ? exit_nonfinite : exit_ok;
}

inline int cmd_run(const std::string& config_path, const std::optional<std::string>& out_dir, std::ostream& out,
                   std::ostream& err) {
    const auto config = detail::load_config(config_path, err);
    if (!config) return exit_config;
    try {
        return run_and_write(*config, out_dir ? *out_dir : config->output_dir, out);
    } catch (const ConfigError& e) {
        detail::report_config_error(err, e);
        return exit_config;
    }
}

struct BoundQuery {
    int N = 3;
    double n = 1.0;
    double R = 1.0;
    double M = 0.0;
    int delta = 0;
    double H0 = 0.0;
};

inline int cmd_bound(const BoundQuery& q, std::ostream& out, std::ostream& err) {
    try {
        const Force force = force_from_int(q.delta);
        const double thr = force == Force::attractive ? threshold(q.N, q.n, q.R, q.M) : 0.0;
        const RiccatiBound bound = with_initial_value(coefficients(q.N, q.n, q.R, q.M, force), q.H0);
        out << "threshold = " << format_double(thr) << "\n"
            << "a = " << format_double(bound.a) << "\n"
            << "b = " << format_double(bound.b) << "\n"
            << "beta = " << format_double(bound.beta) << "\n"
            << "H0 = " << format_double(bound.H0) << "\n"
            << "T_star = " << (bound.T_star ? format_double(*bound.T_star) : "no finite bound") << "\n";
        return exit_ok;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_config;
    }
}

inline int cmd_check_ic(const std::string& config_path, std::ostream& out, std::ostream& err) {
    const auto config = detail::load_config(config_path, err);
    if (!config) return exit_config;
    try {
        const PreparedRun prep = prepare_run(*config);
        const auto& r = prep.hypotheses;
        out << "n = " << format_double(r.n) << "\n"
            << "H0 = " << format_double(r.H0) << "\n"
            << "M = " << format_double(r.M) << "\n"
            << "threshold = " << format_double(r.threshold) << "\n"
            << "satisfied = " << (r.satisfied ? "true" : "false") << "\n"
            << "margin = " << format_double(r.margin) << "\n"
            << "v_amplitude = " << format_double(prep.profile.v_amplitude) << "\n";
        return exit_ok;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_config;
    }
}

inline int cmd_sweep(const std::string& sweep_path, unsigned jobs, const std::optional<std::string>& out_dir,
                     std::ostream& out, std::ostream& err) {
    const auto text = detail::slurp(sweep_path);
    if (!text) {
        err << "configuration error: cannot read " << sweep_path << '\n';
        return exit_config;
    }
    SweepSpec spec;
    try {
        spec = parse_sweep(*text);
    } catch (const ConfigError& e) {
        detail::report_config_error(err, e);
        return exit_config;
    }
    const std::filesystem::path dir =
        out_dir ? *out_dir : (spec.points.empty() ? std::string("out") : spec.points.front().config.output_dir);
    const auto outcomes = run_sweep(spec, jobs);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!outcomes[i].result) continue;
        std::ostringstream name;
        name << "run_" << std::setw(4) << std::setfill('0') << i;
        detail::write_run_artifacts(dir / "runs" / name.str(), *outcomes[i].result);
    }
    std::ostringstream csv;
    write_sweep_csv(csv, spec, outcomes);
    std::filesystem::create_directories(dir);
    if (!detail::write_file(dir / "sweep.csv", csv.str())) {
        err << "cannot write " << (dir / "sweep.csv").string() << '\n';
        return exit_config;
    }
    out << outcomes.size() << " runs; aggregate written to " << (dir / "sweep.csv").string() << "\n";
    return exit_ok;
}

/// Reads the bound back from a summary document written by `run`.
[[nodiscard]] inline std::optional<RiccatiBound> bound_from_summary(const std::map<std::string, std::string>& s) {
    auto get = [&](const std::string& k) -> std::optional<double> {
        auto it = s.find(k);
        if (it == s.end()) return std::nullopt;
        return detail::parse_double(it->second);
    };
    auto a = get("a"), b = get("b"), beta = get("beta"), H0 = get("H0");
    if (!a || !b || !beta || !H0) return std::nullopt;
    RiccatiBound bound{*a, *b, *beta, *H0, get("T_star")};
    return bound;
}

/// Plots a series; the comparison curve comes from `summary_path`, or summary.txt next to the series.
inline int cmd_plot(const std::string& series_path, const std::string& output_path,
                    const std::optional<std::string>& summary_path, bool log_y, std::ostream& out,
                    std::ostream& err) {
    std::ifstream in(series_path);
    if (!in) {
        err << "cannot read series " << series_path << '\n';
        return exit_config;
    }
    std::vector<TimeSeriesRecord> series;
    try {
        series = read_series_csv(in);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_config;
    }
    const std::filesystem::path sp =
        summary_path ? std::filesystem::path(*summary_path)
                     : std::filesystem::path(series_path).parent_path() / "summary.txt";
    std::optional<RiccatiBound> bound;
    if (const auto text = detail::slurp(sp)) {
        try {
            bound = bound_from_summary(read_summary(*text));
        } catch (const ConfigError& e) {
            detail::report_config_error(err, e);
            return exit_config;
        }
    } else if (summary_path) {
        err << "cannot read summary " << *summary_path << '\n';
        return exit_config;
    }
    PlotOptions opt;
    opt.log_y = log_y;
    if (!detail::write_file(output_path, render_svg(series, bound, opt))) {
        err << "cannot write " << output_path << '\n';
        return exit_config;
    }
    out << "plot written to " << output_path << "\n";
    return exit_ok;
}

} // namespace blowup
