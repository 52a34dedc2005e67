#include "blowup/commands.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace blowup;
using testing_support::read_text;
using testing_support::TempDir;
using testing_support::write_text;

namespace {

std::string repulsive_config(const std::string& out_dir) {
    return "model.N = 3\nmodel.delta = 1\nmodel.K = 0\nmodel.gamma = 1.4\nmodel.R = 1\n"
           "grid.cells = 100\nprofile.rho_center = 1\nprofile.support_radius = 0.8\n"
           "profile.v_amplitude = 5\nsolver.t_end = 0.05\ndiagnostics.n = 1\n"
           "solver.blowup.gradient_scale = 10\noutput.dir = " +
           out_dir + "\n";
}

std::string static_config(const std::string& out_dir) {
    return "model.N = 3\nmodel.delta = 0\nmodel.K = 0\nmodel.gamma = 1.4\nmodel.R = 1\n"
           "grid.cells = 32\nprofile.rho_center = 1\nprofile.support_radius = 0.5\n"
           "profile.v_amplitude = 0\nsolver.t_end = 0.1\ndiagnostics.n = 1\noutput.dir = " +
           out_dir + "\n";
}

std::map<std::string, std::string> summary_at(const std::filesystem::path& dir) {
    return read_summary(read_text(dir / "summary.txt"));
}

double value_of(const std::string& text, const std::string& key) {
    const auto at = text.find(key + " = ");
    EXPECT_NE(at, std::string::npos) << key;
    const auto start = at + key.size() + 3;
    return *detail::parse_double(text.substr(start, text.find('\n', start) - start));
}

} // namespace

TEST(Commands, RunWritesArtifacts) {
    TempDir tmp;
    write_text(tmp / "run.cfg", repulsive_config((tmp / "out").string()));
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run((tmp / "run.cfg").string(), std::nullopt, out, err), exit_ok) << err.str();
    for (const char* f : {"series.csv", "summary.txt", "config.txt"})
        EXPECT_TRUE(std::filesystem::exists(tmp / "out" / f)) << f;

    const auto s = summary_at(tmp / "out");
    const double H0 = *detail::parse_double(s.at("H0"));
    EXPECT_NEAR(*detail::parse_double(s.at("T_star")), 2.0 / (2.0 * H0), 1e-12);
    EXPECT_EQ(s.at("threshold"), "0");
    EXPECT_EQ(s.at("satisfied"), "true");
    EXPECT_EQ(s.at("positivity_violations"), "0");

    std::ifstream series(tmp / "out" / "series.csv");
    const auto records = read_series_csv(series);
    EXPECT_EQ(std::to_string(records.size()), s.at("records"));
    EXPECT_EQ(records.front().H, H0);
    EXPECT_EQ(parse_config(read_text(tmp / "out" / "config.txt")), parse_config(read_text(tmp / "run.cfg")));
}

TEST(Commands, OutDirOverridesConfig) {
    TempDir tmp;
    write_text(tmp / "run.cfg", static_config((tmp / "ignored").string()));
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run((tmp / "run.cfg").string(), (tmp / "chosen").string(), out, err), exit_ok);
    EXPECT_TRUE(std::filesystem::exists(tmp / "chosen" / "summary.txt"));
    EXPECT_FALSE(std::filesystem::exists(tmp / "ignored"));
    EXPECT_EQ(summary_at(tmp / "chosen").at("status"), "completed");
}

TEST(Commands, MalformedConfigExitsWithoutOutput) {
    TempDir tmp;
    write_text(tmp / "bad.cfg", "model.N = 3\nmodel.delta = 7\noutput.dir = " + (tmp / "out").string() + "\n");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run((tmp / "bad.cfg").string(), std::nullopt, out, err), exit_config);
    EXPECT_NE(err.str().find("model.delta"), std::string::npos);
    EXPECT_NE(err.str().find("model.K: missing"), std::string::npos);
    EXPECT_FALSE(std::filesystem::exists(tmp / "out"));
    EXPECT_EQ(cmd_run((tmp / "absent.cfg").string(), std::nullopt, out, err), exit_config);
}

TEST(Commands, BoundAttractiveExample) {
    std::ostringstream out, err;
    ASSERT_EQ(cmd_bound({3, 2.0, 1.0, 1.0, -1, 2.0}, out, err), exit_ok);
    const std::string text = out.str();
    const double beta = std::sqrt(1.0 / 3.0);
    EXPECT_NEAR(value_of(text, "threshold"), beta, 1e-15);
    EXPECT_EQ(value_of(text, "a"), 3.0);
    EXPECT_EQ(value_of(text, "b"), 1.0);
    EXPECT_NEAR(value_of(text, "T_star"), std::log((2.0 + beta) / (2.0 - beta)) / (2.0 * std::sqrt(3.0)), 1e-15);
}

TEST(Commands, BoundRepulsiveExample) {
    std::ostringstream out, err;
    ASSERT_EQ(cmd_bound({3, 1.0, 1.0, 0.0, 1, 1.0}, out, err), exit_ok);
    EXPECT_EQ(value_of(out.str(), "T_star"), 1.0);
    EXPECT_EQ(value_of(out.str(), "threshold"), 0.0);
}

TEST(Commands, BoundBelowThresholdHasNoFiniteTime) {
    std::ostringstream out, err;
    ASSERT_EQ(cmd_bound({3, 2.0, 1.0, 1.0, -1, 0.5}, out, err), exit_ok);
    EXPECT_NE(out.str().find("T_star = no finite bound"), std::string::npos);
}

TEST(Commands, BoundRejectsInvalidExponent) {
    std::ostringstream out, err;
    EXPECT_EQ(cmd_bound({3, 1.0, 1.0, 1.0, -1, 2.0}, out, err), exit_config);
    EXPECT_NE(err.str().find("n > max(N-2, 0)"), std::string::npos);
}

TEST(Commands, CheckIcAgreesWithBound) {
    TempDir tmp;
    const std::string cfg = "model.N = 3\nmodel.delta = -1\nmodel.K = 1\nmodel.gamma = 1.4\nmodel.R = 1\n"
                            "grid.cells = 200\nprofile.rho_center = 1\nprofile.support_radius = 0.8\n"
                            "profile.target_H0_multiplier = 2\nsolver.t_end = 1\ndiagnostics.n = 2\n";
    write_text(tmp / "ic.cfg", cfg);
    std::ostringstream out, err;
    ASSERT_EQ(cmd_check_ic((tmp / "ic.cfg").string(), out, err), exit_ok) << err.str();
    const std::string text = out.str();
    const double M = value_of(text, "M");
    const double thr = value_of(text, "threshold");
    EXPECT_EQ(thr, threshold(3, 2.0, 1.0, M));

    std::ostringstream bout, berr;
    ASSERT_EQ(cmd_bound({3, 2.0, 1.0, M, -1, value_of(text, "H0")}, bout, berr), exit_ok);
    EXPECT_EQ(value_of(bout.str(), "threshold"), thr);
    EXPECT_NE(text.find("satisfied = true"), std::string::npos);
}

TEST(Commands, SweepSinglePointMatchesRun) {
    TempDir tmp;
    write_text(tmp / "one.cfg", repulsive_config((tmp / "run").string()));
    write_text(tmp / "sweep.cfg", repulsive_config((tmp / "sweep").string()) + "sweep.grid.cells = 100\n");
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run((tmp / "one.cfg").string(), std::nullopt, out, err), exit_ok);
    ASSERT_EQ(cmd_sweep((tmp / "sweep.cfg").string(), 1, std::nullopt, out, err), exit_ok) << err.str();
    EXPECT_EQ(read_text(tmp / "run" / "summary.txt"), read_text(tmp / "sweep" / "runs" / "run_0000" / "summary.txt"));
    EXPECT_EQ(read_text(tmp / "run" / "series.csv"), read_text(tmp / "sweep" / "runs" / "run_0000" / "series.csv"));
}

TEST(Commands, SweepOrderAndDeterminism) {
    TempDir tmp;
    const std::string spec =
        static_config("unused") + "sweep.grid.cells = 16, 32\nsweep.profile.v_amplitude = 0.5, 1\n";
    write_text(tmp / "sweep.cfg", spec);
    std::ostringstream out, err;
    ASSERT_EQ(cmd_sweep((tmp / "sweep.cfg").string(), 1, (tmp / "serial").string(), out, err), exit_ok);
    ASSERT_EQ(cmd_sweep((tmp / "sweep.cfg").string(), 4, (tmp / "parallel").string(), out, err), exit_ok);
    const std::string serial = read_text(tmp / "serial" / "sweep.csv");
    EXPECT_EQ(serial, read_text(tmp / "parallel" / "sweep.csv"));

    std::istringstream lines(serial);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("index,grid.cells,profile.v_amplitude,status,", 0), 0u);
    const char* expected[] = {"0,16,0.5,", "1,16,1,", "2,32,0.5,", "3,32,1,"};
    for (const char* prefix : expected) {
        ASSERT_TRUE(std::getline(lines, line));
        EXPECT_EQ(line.rfind(prefix, 0), 0u) << line;
    }
    EXPECT_FALSE(std::getline(lines, line));
}

TEST(Commands, SweepRejectsInvalidPoint) {
    TempDir tmp;
    write_text(tmp / "sweep.cfg", static_config("unused") + "sweep.grid.cells = 16, 4\n");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_sweep((tmp / "sweep.cfg").string(), 2, (tmp / "o").string(), out, err), exit_config);
    EXPECT_NE(err.str().find("point 1: grid.cells"), std::string::npos);
    EXPECT_FALSE(std::filesystem::exists(tmp / "o"));
}

TEST(Commands, PlotIsByteStable) {
    TempDir tmp;
    write_text(tmp / "run.cfg", repulsive_config((tmp / "out").string()));
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run((tmp / "run.cfg").string(), std::nullopt, out, err), exit_ok);
    const std::string series = (tmp / "out" / "series.csv").string();
    ASSERT_EQ(cmd_plot(series, (tmp / "a.svg").string(), std::nullopt, false, out, err), exit_ok) << err.str();
    ASSERT_EQ(cmd_plot(series, (tmp / "b.svg").string(), std::nullopt, false, out, err), exit_ok);
    const std::string svg = read_text(tmp / "a.svg");
    EXPECT_EQ(svg, read_text(tmp / "b.svg"));
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("T* = "), std::string::npos);

    ASSERT_EQ(cmd_plot(series, (tmp / "c.svg").string(), std::nullopt, true, out, err), exit_ok);
    EXPECT_NE(read_text(tmp / "c.svg").find("log10 H"), std::string::npos);
}

TEST(Commands, PlotOfStaticRunHasNoBoundCurve) {
    TempDir tmp;
    write_text(tmp / "run.cfg", static_config((tmp / "out").string()));
    std::ostringstream out, err;
    ASSERT_EQ(cmd_run((tmp / "run.cfg").string(), std::nullopt, out, err), exit_ok);
    ASSERT_EQ(cmd_plot((tmp / "out" / "series.csv").string(), (tmp / "s.svg").string(), std::nullopt, false, out, err),
              exit_ok);
    const std::string svg = read_text(tmp / "s.svg");
    EXPECT_EQ(svg.find("T* = "), std::string::npos);
    EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(Commands, PlotOfMissingSeriesFails) {
    TempDir tmp;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_plot((tmp / "none.csv").string(), (tmp / "x.svg").string(), std::nullopt, false, out, err),
              exit_config);
    EXPECT_FALSE(std::filesystem::exists(tmp / "x.svg"));
}

TEST(Commands, SeriesCsvRoundTrips) {
    std::vector<TimeSeriesRecord> records(2);
    records[0].H = 0.1;
    records[0].gravitational = -1.5;
    records[1].t = 1.0 / 3.0;
    records[1].max_dVdr = 1e-300;
    std::stringstream buf;
    write_series_csv(buf, records);
    const auto back = read_series_csv(buf);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].H, 0.1);
    EXPECT_EQ(back[0].gravitational, -1.5);
    EXPECT_FALSE(back[1].gravitational);
    EXPECT_EQ(back[1].t, 1.0 / 3.0);
    EXPECT_EQ(back[1].max_dVdr, 1e-300);

    std::istringstream wrong("t,H\n1,2\n");
    EXPECT_THROW((void)read_series_csv(wrong), Error);
}
