// Command-line front end: run, bound, check-ic, sweep, plot.

#include "blowup/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Radially symmetric Euler / Euler-Poisson blowup simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;

    auto* run = app.add_subcommand("run", "simulate one configuration");
    run->add_option("--config", config_path, "run document")->required();
    run->add_option("--out", out_dir, "output directory (overrides output.dir)");

    blowup::BoundQuery query;
    auto* bound = app.add_subcommand("bound", "print threshold, Riccati coefficients and T*");
    bound->add_option("--N", query.N, "spatial dimension")->required();
    bound->add_option("--n", query.n, "weight exponent")->required();
    bound->add_option("--R", query.R, "support radius")->required();
    bound->add_option("--M", query.M, "mass constant alpha(N) * int rho s^{N-1} ds")->required();
    bound->add_option("--delta", query.delta, "force sign -1, 0 or 1")->required();
    bound->add_option("--H0", query.H0, "initial functional value")->required();

    auto* check = app.add_subcommand("check-ic", "evaluate the initial-data hypotheses");
    check->add_option("--config", config_path, "run document")->required();

    unsigned jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "run the Cartesian product of sweep axes");
    sweep->add_option("--config", config_path, "sweep document")->required();
    sweep->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_dir, "output directory");

    std::string series_path, summary_path, plot_out;
    bool log_y = false;
    auto* plot = app.add_subcommand("plot", "write an SVG of H(t) against the comparison curve");
    plot->add_option("--series", series_path, "series CSV")->required();
    plot->add_option("--out", plot_out, "SVG file to write")->required();
    plot->add_option("--summary", summary_path, "summary document (default: summary.txt beside the series)");
    plot->add_flag("--log-y", log_y, "logarithmic H axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : blowup::exit_config;
    }

    auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<std::string>(s); };
    try {
        if (*run) return blowup::cmd_run(config_path, opt(out_dir), std::cout, std::cerr);
        if (*bound) return blowup::cmd_bound(query, std::cout, std::cerr);
        if (*check) return blowup::cmd_check_ic(config_path, std::cout, std::cerr);
        if (*sweep) return blowup::cmd_sweep(config_path, jobs, opt(out_dir), std::cout, std::cerr);
        if (*plot) return blowup::cmd_plot(series_path, plot_out, opt(summary_path), log_y, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return blowup::exit_config;
    }
    return blowup::exit_ok;
}
