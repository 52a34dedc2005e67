#include "blowup/config.hpp"
#include "blowup/sweep.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

using namespace blowup;

namespace {

const std::string base = R"(# attractive gas ball
model.N = 3
model.delta = -1
model.K = 1
model.gamma = 1.4
model.R = 1
grid.cells = 64
profile.rho_center = 1
profile.support_radius = 0.8
profile.target_H0_multiplier = 2
solver.t_end = 0.5
diagnostics.n = 2
)";

std::vector<std::string> violations_of(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.violations();
    }
    return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const auto& s) { return s.find(needle) != std::string::npos; });
}

std::string replace_line(std::string text, const std::string& key, const std::string& line) {
    const auto at = text.find(key + " =");
    const auto end = text.find('\n', at);
    return text.replace(at, end - at, line);
}

} // namespace

TEST(Config, ParsesWithDefaults) {
    const RunConfig c = parse_config(base);
    EXPECT_EQ(c.model.N, 3);
    EXPECT_EQ(c.model.delta, -1);
    EXPECT_EQ(c.grid.cells, 64u);
    EXPECT_EQ(c.grid.domain_radius, 1.0);
    EXPECT_EQ(c.profile.target_H0_multiplier, 2.0);
    EXPECT_FALSE(c.profile.v_amplitude);
    EXPECT_DOUBLE_EQ(c.solver.cfl, 0.45);
    EXPECT_EQ(c.solver.record_every, 10u);
    EXPECT_EQ(c.solver.reconstruction, Reconstruction::first_order);
    EXPECT_EQ(c.solver.blowup.density_ratio, 1e6);
    EXPECT_EQ(c.solver.blowup.gradient_scale, 1e3);
    EXPECT_EQ(c.output_dir, "out");
}

TEST(Config, RenderRoundTrips) {
    RunConfig c = parse_config(base + "solver.reconstruction = muscl-minmod\nsolver.cfl = 0.3\ngrid.domain_radius = 1.5\n");
    c.solver.blowup.gradient_scale = 0.1 + 0.2;
    EXPECT_EQ(parse_config(render_config(c)), c);
}

TEST(Config, ExponentAtLowerBoundIsRejected) {
    const auto v = violations_of(replace_line(base, "diagnostics.n", "diagnostics.n = 1"));
    ASSERT_EQ(v.size(), 1u);
    EXPECT_TRUE(mentions(v, "diagnostics.n"));
    EXPECT_TRUE(mentions(v, "n > max(N-2, 0) = 1"));
}

TEST(Config, AmplitudeOptionsAreExclusive) {
    EXPECT_TRUE(mentions(violations_of(base + "profile.v_amplitude = 1\n"), "exactly one"));
    EXPECT_TRUE(mentions(violations_of(replace_line(base, "profile.target_H0_multiplier", "")), "exactly one"));
}

TEST(Config, MultiplierNeedsAttraction) {
    const auto v = violations_of(replace_line(base, "model.delta", "model.delta = 1"));
    EXPECT_TRUE(mentions(v, "profile.target_H0_multiplier"));
}

TEST(Config, CollectsEveryViolation) {
    std::string text = replace_line(base, "model.N", "model.N = 0");
    text = replace_line(text, "grid.cells", "grid.cells = 4");
    text = replace_line(text, "solver.t_end", "solver.t_end = -1");
    text += "solver.cfl = 1.5\nbogus.key = 3\nnot a line\n";
    const auto v = violations_of(text);
    EXPECT_TRUE(mentions(v, "model.N"));
    EXPECT_TRUE(mentions(v, "grid.cells"));
    EXPECT_TRUE(mentions(v, "solver.t_end"));
    EXPECT_TRUE(mentions(v, "solver.cfl"));
    EXPECT_TRUE(mentions(v, "bogus.key"));
    EXPECT_TRUE(mentions(v, "line 15"));
}

TEST(Config, MissingAndDuplicateKeys) {
    EXPECT_TRUE(mentions(violations_of(replace_line(base, "model.K", "")), "model.K: missing"));
    EXPECT_TRUE(mentions(violations_of(base + "model.R = 2\n"), "model.R"));
}

TEST(Config, GeometryConstraints) {
    EXPECT_TRUE(mentions(violations_of(base + "grid.domain_radius = 0.5\n"), "grid.domain_radius"));
    EXPECT_TRUE(mentions(violations_of(replace_line(base, "profile.support_radius", "profile.support_radius = 1")),
                         "profile.support_radius"));
    EXPECT_NO_THROW((void)parse_config(base + "grid.domain_radius = 2\n"));
}

TEST(Config, BadValuesAreReported) {
    EXPECT_TRUE(mentions(violations_of(replace_line(base, "model.K", "model.K = one")), "model.K"));
    EXPECT_TRUE(mentions(violations_of(replace_line(base, "grid.cells", "grid.cells = 6.5")), "grid.cells"));
    EXPECT_TRUE(mentions(violations_of(base + "solver.reconstruction = weno\n"), "solver.reconstruction"));
}

TEST(Config, FormatDoubleRoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) {
        const auto s = format_double(x);
        EXPECT_EQ(detail::parse_double(s), x) << s;
    }
    EXPECT_EQ(format_double(0.45), "0.45");
    EXPECT_EQ(format_double(1e6), "1e+06");
    EXPECT_EQ(format_double(3.0), "3");
}

TEST(Config, ResolvedAmplitudeHitsThresholdMultiple) {
    const RunConfig c = parse_config(base);
    const RadialGrid g = make_grid(c);
    const ProfileSpec spec = resolve_profile(c, g);
    const FluidState s = build_profile(spec, g);
    const auto report = check_hypotheses(s, g, make_params(c), c.n);
    EXPECT_NEAR(report.H0, 2.0 * report.threshold, 1e-14);
    EXPECT_TRUE(report.satisfied);
}

TEST(Config, ShippedConfigsParse) {
    std::size_t count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(BLOWUP_CONFIG_DIR)) {
        std::ifstream in(entry.path());
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (text.find("sweep.") != std::string::npos) EXPECT_NO_THROW((void)parse_sweep(text)) << entry.path();
        else EXPECT_NO_THROW((void)parse_config(text)) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 3u);
}
