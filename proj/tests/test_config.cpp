#include <numbers>
#include <string>

#include "doctest.h"
#include "orbitbound/config.hpp"
#include "orbitbound/pipeline.hpp"

using namespace orbitbound;

namespace {

const std::string kMinimal = R"(
[system]
dimension = 1
mass = [[1.0]]
damping = [[0.5]]
stiffness = [[2.0]]

[forcing]
period = 6.0

[[forcing.harmonics]]
n = 1
sin = [1.0]
)";

std::string config_path(const char* name) {
    return std::string(ORBITBOUND_CONFIG_DIR) + "/" + name;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("the bundled hardening config parses to the worked example") {
    const RunConfig config = load_config(config_path("duffing_hard.toml"));
    CHECK(config.system.dimension == 1);
    CHECK(config.system.mass(0, 0) == 1.0);
    CHECK(config.system.damping(0, 0) == 0.1);
    CHECK(config.system.stiffness(0, 0) == 1.1);
    CHECK(config.system.potential.kind == PotentialKind::Hardening);
    CHECK(config.system.potential.growth_coef == 1.0);
    CHECK(config.system.potential.growth_exponent == 4.0);
    CHECK(config.system.potential.gradient_bound == 1.0);
    CHECK(config.system.domain_radius == 1.0);
    REQUIRE(config.cubic_coef.has_value());
    CHECK(*config.cubic_coef == 1.0);
    CHECK(config.forcing.period() == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-15));
    REQUIRE(config.forcing.harmonics().size() == 1);
    CHECK(config.forcing.harmonics()[0].index == 1);
    CHECK(config.forcing.harmonics()[0].sin_coef[0] == 1.0);
    CHECK(config.analysis.periods == std::vector<int>{1, 2, 4});
    CHECK(config.analysis.amplitude == 1.0);
}

TEST_CASE("the bundled softening and linear configs parse") {
    const RunConfig soft = load_config(config_path("duffing_soft.toml"));
    CHECK(soft.system.potential.kind == PotentialKind::Softening);
    const RunConfig linear = load_config(config_path("linear_2d.toml"));
    CHECK(linear.system.dimension == 2);
    CHECK(linear.system.potential.kind == PotentialKind::None);
    CHECK_FALSE(linear.cubic_coef.has_value());
    CHECK(linear.system.stiffness(0, 1) == 1.0);
    REQUIRE(linear.forcing.harmonics().size() == 2);
    CHECK(linear.forcing.harmonics()[1].index == 3);
}

TEST_CASE("serialization round-trips canonically") {
    const RunConfig config = load_config(config_path("duffing_hard.toml"));
    const std::string first = serialize_config(config);
    const RunConfig reparsed = parse_config(first);
    const std::string second = serialize_config(reparsed);
    CHECK(first == second);
    CHECK(reparsed.system.stiffness(0, 0) == config.system.stiffness(0, 0));
    CHECK(reparsed.forcing.period() == config.forcing.period());
}

TEST_CASE("defaults fill optional sections") {
    const RunConfig config = parse_config(kMinimal);
    CHECK(config.system.potential.kind == PotentialKind::None);
    CHECK(config.system.domain_radius == 1.0);
    CHECK_FALSE(config.cubic_coef.has_value());
    CHECK(config.analysis.periods == std::vector<int>{1});
    CHECK(config.analysis.amplitude == 1.0);
    CHECK(config.analysis.step == 0.0);
    CHECK(config.forcing.mean()[0] == 0.0);
    CHECK(config.forcing.harmonics()[0].cos_coef[0] == 0.0);
}

TEST_CASE("exactly one of period and omega must be given") {
    CHECK_THROWS_AS(parse_config(R"(
[system]
dimension = 1
mass = [[1.0]]
damping = [[1.0]]
stiffness = [[1.0]]

[forcing]
period = 1.0
omega = 1.0
)"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"(
[system]
dimension = 1
mass = [[1.0]]
damping = [[1.0]]
stiffness = [[1.0]]

[forcing]
mean = [1.0]
)"),
                    ConfigError);
}

TEST_CASE("schema violations carry field paths") {
    try {
        parse_config(R"(
[system]
dimension = 1
mass = [[1.0]]
damping = [[1.0]]
stiffness = [[1.0]]

[forcing]
period = 1.0

[[forcing.harmonics]]
n = 0
sin = [1.0]
)");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("forcing.harmonics") != std::string::npos);
        CHECK_FALSE(e.field_path().empty());
    }
}

TEST_CASE("dimension mismatches are rejected with paths") {
    const char* bad = R"(
[system]
dimension = 2
mass = [[1.0, 0.0], [0.0, 1.0]]
damping = [[1.0, 0.0], [0.0, 1.0]]
stiffness = [[1.0]]

[forcing]
period = 1.0
)";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("unknown keys and duplicate keys are rejected") {
    CHECK_THROWS_AS(parse_config(kMinimal + "\n[analysis]\nperiods = [1]\nbogus = 3\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(kMinimal + "\n[analysis]\namplitude = 1.0\namplitude = 2.0\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(kMinimal + "\n[unknown_section]\nx = 1\n"), ConfigError);
}

TEST_CASE("analysis options are validated") {
    CHECK_THROWS_AS(parse_config(kMinimal + "\n[analysis]\nperiods = []\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(kMinimal + "\n[analysis]\nperiods = [0]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(kMinimal + "\n[analysis]\namplitude = -1.0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(kMinimal + "\n[analysis]\nstep = -0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(kMinimal + "\n[analysis]\ninitial_state = [1.0]\n"),
                    ConfigError);
    const RunConfig ok =
        parse_config(kMinimal + "\n[analysis]\ninitial_state = [1.0, 0.0]\nstep = 0.01\n");
    CHECK(ok.analysis.initial_state.size() == 2);
    CHECK(ok.analysis.step == 0.01);
}

TEST_CASE("comments and quoted strings survive parsing") {
    const RunConfig config = parse_config(R"(
# leading comment
[system]
dimension = 1          # trailing comment
mass = [[1.0]]
damping = [[1.0]]
stiffness = [[1.0]]

[potential]
kind = "none"          # a '#' inside a string stays: not here though

[forcing]
period = 2.0
)");
    CHECK(config.system.dimension == 1);
}

TEST_CASE("a delta potential with kind none parses but verify refuses it") {
    const std::string text = kMinimal + "\n[potential]\ndelta = 0.5\n";
    const RunConfig config = parse_config(text);
    REQUIRE(config.cubic_coef.has_value());
    CHECK(config.system.potential.kind == PotentialKind::None);
    CHECK_THROWS_AS(run_verify(config, 1.0, std::nullopt), ConfigError);
    try {
        run_verify(config, 1.0, std::nullopt);
    } catch (const ConfigError& e) {
        CHECK(e.field_path() == "potential.delta");
    }
}

TEST_CASE("missing file errors mention the path") {
    CHECK_THROWS_AS(load_config("/nonexistent/nowhere.toml"), ConfigError);
}

}  // TEST_SUITE
