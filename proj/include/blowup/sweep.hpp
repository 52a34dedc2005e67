#pragma once

// Parameter sweeps: a base run document plus `sweep.<key> = v1, v2, ...` axes,
// expanded into their Cartesian product (first axis slowest).

#include "blowup/config.hpp"
#include "blowup/errors.hpp"
#include "blowup/io.hpp"
#include "blowup/run.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace blowup {

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

struct SweepPoint {
    std::vector<std::string> axis_values;
    RunConfig config;
};

struct SweepSpec {
    std::vector<SweepAxis> axes;
    std::vector<SweepPoint> points;
};

[[nodiscard]] inline SweepSpec parse_sweep(std::string_view text) {
    std::vector<std::string> violations;
    const auto entries = parse_entries(text, violations);
    const std::set<std::string> known(config_keys().begin(), config_keys().end());

    SweepSpec spec;
    std::vector<ConfigEntry> base;
    for (const auto& e : entries) {
        if (e.key.rfind("sweep.", 0) != 0) {
            base.push_back(e);
            continue;
        }
        SweepAxis axis{e.key.substr(6), {}};
        if (!known.count(axis.key) || axis.key == "output.dir") {
            violations.push_back(e.key + ": not a sweepable run key");
            continue;
        }
        std::string_view rest = e.value;
        while (true) {
            const auto comma = rest.find(',');
            const auto item = detail::trim(rest.substr(0, comma));
            if (item.empty()) violations.push_back(e.key + ": empty axis value");
            else axis.values.emplace_back(item);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        spec.axes.push_back(std::move(axis));
    }
    if (!violations.empty()) throw ConfigError(std::move(violations));

    std::size_t total = 1;
    for (const auto& a : spec.axes) total *= a.values.size();
    std::vector<std::size_t> index(spec.axes.size(), 0);
    for (std::size_t p = 0; p < total; ++p) {
        std::vector<ConfigEntry> merged = base;
        SweepPoint point;
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            const auto& axis = spec.axes[a];
            const std::string& value = axis.values[index[a]];
            point.axis_values.push_back(value);
            auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& m) { return m.key == axis.key; });
            if (it != merged.end()) it->value = value;
            else merged.push_back({axis.key, value, 0});
        }
        try {
            point.config = config_from_entries(merged);
            spec.points.push_back(std::move(point));
        } catch (const ConfigError& e) {
            for (const auto& v : e.violations()) violations.push_back("point " + std::to_string(p) + ": " + v);
        }
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            if (++index[a] < spec.axes[a].values.size()) break;
            index[a] = 0;
        }
    }
    if (!violations.empty()) throw ConfigError(std::move(violations));
    return spec;
}

struct SweepOutcome {
    std::optional<RunResult> result;
    /// Set when the run threw instead of completing.
    std::string error;
};

/// Runs every point with up to `jobs` concurrent workers; results keep point order.
[[nodiscard]] inline std::vector<SweepOutcome> run_sweep(const SweepSpec& spec, unsigned jobs) {
    std::vector<SweepOutcome> outcomes(spec.points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < spec.points.size(); i = next++) {
            try {
                outcomes[i].result = run_simulation(spec.points[i].config);
            } catch (const std::exception& e) {
                outcomes[i].error = e.what();
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, spec.points.size()))));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return outcomes;
}

[[nodiscard]] inline std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepOutcome>& outcomes) {
    // Field names do not depend on the run, so take them from a default result.
    const SummaryFields names = summary_fields(RunResult{});
    out << "index";
    for (const auto& a : spec.axes) out << ',' << a.key;
    for (const auto& [k, v] : names) out << ',' << k;
    out << ",error\n";
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        out << i;
        for (const auto& v : spec.points[i].axis_values) out << ',' << csv_cell(v);
        if (outcomes[i].result) {
            for (const auto& [k, v] : summary_fields(*outcomes[i].result)) out << ',' << csv_cell(v);
            out << ",\n";
        } else {
            out << ",error";
            for (std::size_t k = 1; k < names.size(); ++k) out << ',';
            out << ',' << csv_cell(outcomes[i].error) << '\n';
        }
    }
}

} // namespace blowup
