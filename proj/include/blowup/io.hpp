#pragma once

// Series CSV and summary documents.

#include "blowup/config.hpp"
#include "blowup/diagnostics.hpp"
#include "blowup/errors.hpp"
#include "blowup/run.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blowup {

inline const std::vector<std::string>& series_columns() {
    static const std::vector<std::string> cols = {"t",        "dt",       "H",         "M_paper",
                                                  "mass_discrete", "kinetic", "internal", "gravitational",
                                                  "max_rho",  "max_absV", "max_dVdr",  "support_edge"};
    return cols;
}

inline void write_series_csv(std::ostream& out, const std::vector<TimeSeriesRecord>& series) {
    const auto& cols = series_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : series) {
        out << format_double(r.t) << ',' << format_double(r.dt) << ',' << format_double(r.H) << ','
            << format_double(r.M_paper) << ',' << format_double(r.mass_discrete) << ',' << format_double(r.kinetic)
            << ',' << format_double(r.internal) << ',' << (r.gravitational ? format_double(*r.gravitational) : "")
            << ',' << format_double(r.max_rho) << ',' << format_double(r.max_absV) << ','
            << format_double(r.max_dVdr) << ',' << format_double(r.support_edge) << '\n';
    }
}

[[nodiscard]] inline std::vector<TimeSeriesRecord> read_series_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::io, "series file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string expected;
    for (const auto& c : series_columns()) expected += (expected.empty() ? "" : ",") + c;
    if (line != expected) throw Error(ErrorKind::io, "series header does not match the expected columns");

    std::vector<TimeSeriesRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (cells.size() != series_columns().size())
            throw Error(ErrorKind::io, "line " + std::to_string(line_no) + ": wrong number of columns");
        std::vector<double> values(cells.size(), 0.0);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == 7 && cells[i].empty()) continue;
            auto x = detail::parse_double(cells[i]);
            if (!x)
                throw Error(ErrorKind::io,
                            "line " + std::to_string(line_no) + ": bad value in column " + series_columns()[i]);
            values[i] = *x;
        }
        TimeSeriesRecord r;
        r.t = values[0];
        r.dt = values[1];
        r.H = values[2];
        r.M_paper = values[3];
        r.mass_discrete = values[4];
        r.kinetic = values[5];
        r.internal = values[6];
        if (!cells[7].empty()) r.gravitational = values[7];
        r.max_rho = values[8];
        r.max_absV = values[9];
        r.max_dVdr = values[10];
        r.support_edge = values[11];
        out.push_back(r);
    }
    return out;
}

using SummaryFields = std::vector<std::pair<std::string, std::string>>;

[[nodiscard]] inline std::string format_optional(const std::optional<double>& x) {
    return x ? format_double(*x) : "none";
}

[[nodiscard]] inline std::string run_status(const RunResult& r) {
    if (r.aborted_nonfinite()) return "nonfinite";
    return r.sim.singularity.triggered ? "detected" : "completed";
}

[[nodiscard]] inline SummaryFields summary_fields(const RunResult& r) {
    const auto& s = r.sim.singularity;
    return {
        {"status", run_status(r)},
        {"triggered", s.triggered ? "true" : "false"},
        {"cause", s.cause ? std::string(to_string(*s.cause)) : "none"},
        {"detected_time", format_optional(s.time)},
        {"T_star", format_optional(r.bound.T_star)},
        {"threshold", format_double(r.hypotheses.threshold)},
        {"H0", format_double(r.hypotheses.H0)},
        {"M", format_double(r.hypotheses.M)},
        {"satisfied", r.hypotheses.satisfied ? "true" : "false"},
        {"margin", format_double(r.hypotheses.margin)},
        {"a", format_double(r.bound.a)},
        {"b", format_double(r.bound.b)},
        {"beta", format_double(r.bound.beta)},
        {"v_amplitude", format_double(r.profile.v_amplitude)},
        {"wall_contact_time", format_optional(r.sim.wall_contact_time)},
        {"final_time", format_double(r.sim.final_state.t)},
        {"steps", std::to_string(r.sim.steps)},
        {"records", std::to_string(r.sim.series.size())},
        {"max_mass_drift", format_double(r.sim.max_mass_drift)},
        {"positivity_violations", std::to_string(r.sim.positivity_violations)},
    };
}

inline void write_summary(std::ostream& out, const RunResult& r) {
    for (const auto& [k, v] : summary_fields(r)) out << k << " = " << v << '\n';
}

/// Reads a key = value summary document into a map.
[[nodiscard]] inline std::map<std::string, std::string> read_summary(std::string_view text) {
    std::vector<std::string> violations;
    auto entries = parse_entries(text, violations);
    if (!violations.empty()) throw ConfigError(std::move(violations));
    std::map<std::string, std::string> out;
    for (auto& e : entries) out.emplace(std::move(e.key), std::move(e.value));
    return out;
}

} // namespace blowup
