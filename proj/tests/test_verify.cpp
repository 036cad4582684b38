#include <cmath>
#include <numbers>

#include "doctest.h"
#include "orbitbound/verify.hpp"

using namespace orbitbound;

namespace {

constexpr double pi = std::numbers::pi;

SystemSpec hardening_duffing(double delta = 1.0) {
    return scalar_system(1.0, 0.1, 1.1, PotentialEnvelope::hardening(delta, 4.0, delta));
}

SystemSpec softening_duffing(double delta = 1.0) {
    return scalar_system(1.0, 0.1, 1.1, PotentialEnvelope::softening(delta, 4.0, delta));
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("cubic gradients drive trajectories componentwise") {
    const ConcretePotentialGradient hard =
        ConcretePotentialGradient::cubic(PotentialKind::Hardening, 2.0, 2);
    const Vector g = hard.gradient({0.5, -1.0});
    CHECK(g[0] == doctest::Approx(2.0 * 0.125));
    CHECK(g[1] == doctest::Approx(-2.0));
    const ConcretePotentialGradient soft =
        ConcretePotentialGradient::cubic(PotentialKind::Softening, 2.0, 1);
    CHECK(soft.gradient({0.5})[0] == doctest::Approx(-0.25));
    CHECK(ConcretePotentialGradient::none(3).gradient({1.0, 2.0, 3.0})[1] == 0.0);
}

TEST_CASE("concrete cubic satisfies its own envelope on the unit ball") {
    const ConcretePotentialGradient grad =
        ConcretePotentialGradient::cubic(PotentialKind::Hardening, 1.0, 1);
    const EnvelopeCheck check =
        check_envelope(grad, PotentialEnvelope::hardening(1.0, 4.0, 1.0), 1.0);
    CHECK(check.ok());
    CHECK(check.samples == 1000);

    // An envelope claiming twice the growth is violated by the same gradient.
    const EnvelopeCheck bad =
        check_envelope(grad, PotentialEnvelope::hardening(2.0, 4.0, 1.0), 1.0);
    CHECK(bad.growth_violations > 0);
    // And a gradient cap below the actual boundary magnitude fails too.
    const EnvelopeCheck capped =
        check_envelope(grad, PotentialEnvelope::hardening(1.0, 4.0, 0.5), 1.0);
    CHECK(capped.gradient_violations > 0);
}

TEST_CASE("rk4 reproduces the linear steady state") {
    // x'' + x' + x = sin t has periodic solution x = -cos t; start on it.
    const SystemSpec spec = scalar_system(1.0, 1.0, 1.0);
    const TrigForcing f = TrigForcing::scalar_sine(1.0, 1.0);
    const Trajectory traj = integrate(spec, ConcretePotentialGradient::none(1), f,
                                      {-1.0, 0.0}, 0.0, 2.0 * pi, 0.0);
    REQUIRE_FALSE(traj.states.empty());
    const Vector& last = traj.states.back();
    CHECK(last[0] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(std::abs(last[1]) <= 1e-9);
    // Interior states track the closed form.
    const std::size_t mid = traj.states.size() / 2;
    const double t_mid = traj.start_time + traj.step * static_cast<double>(mid);
    CHECK(traj.states[mid][0] == doctest::Approx(-std::cos(t_mid)).epsilon(1e-8));
}

TEST_CASE("find_limit_cycle converges to the linear steady state from rest") {
    const SystemSpec spec = scalar_system(1.0, 1.0, 1.0);
    const TrigForcing f = TrigForcing::scalar_sine(1.0, 1.0);
    const OrbitSearchResult result =
        find_limit_cycle(spec, ConcretePotentialGradient::none(1), f, 1);
    REQUIRE(result.outcome == OrbitSearchResult::Outcome::Converged);
    REQUIRE(result.orbit.has_value());
    const OrbitSample& orbit = *result.orbit;
    CHECK(orbit.closure_residual <= 1e-10);
    CHECK(orbit.dynamics_residual <= 1e-6);
    CHECK(orbit_within_tolerances(orbit, f));
    CHECK(orbit.positions.front()[0] == doctest::Approx(-1.0).epsilon(1e-8));

    // L2 and sup norms of the located orbit match ||cos|| closed forms.
    CHECK(orbit_lp_norm(orbit, 2.0, OrbitComponent::Position) ==
          doctest::Approx(std::sqrt(pi)).epsilon(1e-8));
    CHECK(orbit_lp_norm(orbit, 2.0, OrbitComponent::Velocity) ==
          doctest::Approx(std::sqrt(pi)).epsilon(1e-8));
    CHECK(orbit_lp_norm(orbit, infinite_p, OrbitComponent::Position) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(orbit_lp_norm(orbit, 4.0, OrbitComponent::Position) ==
          doctest::Approx(std::pow(0.75 * pi, 0.25)).epsilon(1e-8));
}

TEST_CASE("orbit grid length honours a custom step and stays Simpson-compatible") {
    const SystemSpec spec = scalar_system(1.0, 1.0, 1.0);
    const TrigForcing f = TrigForcing::scalar_sine(1.0, 1.0);
    IntegratorOptions options;
    options.step = f.period() / 102.0;  // 102 steps are not Simpson-compatible -> rounded up
    const OrbitSearchResult result =
        find_limit_cycle(spec, ConcretePotentialGradient::none(1), f, 1, {}, options);
    REQUIRE(result.outcome == OrbitSearchResult::Outcome::Converged);
    const std::size_t intervals = result.orbit->times.size() - 1;
    CHECK(intervals % 4 == 0);
    CHECK(intervals >= 102);
}

TEST_CASE("duffing orbits close and respect the dynamics residual") {
    const SystemSpec spec = hardening_duffing();
    const TrigForcing f = TrigForcing::scalar_sine(0.5, 1.0);
    const ConcretePotentialGradient grad =
        ConcretePotentialGradient::cubic(PotentialKind::Hardening, 1.0, 1);
    const OrbitSearchResult result = find_limit_cycle(spec, grad, f, 1);
    REQUIRE(result.outcome == OrbitSearchResult::Outcome::Converged);
    CHECK(orbit_within_tolerances(*result.orbit, f));
    CHECK(result.final_residual <= 1e-11);
}

TEST_CASE("bound checks pass on a verified hardening orbit") {
    const SystemSpec spec = hardening_duffing();
    const TrigForcing f = TrigForcing::scalar_sine(0.1, 1.0);
    const ConcretePotentialGradient grad =
        ConcretePotentialGradient::cubic(PotentialKind::Hardening, 1.0, 1);
    const OrbitSearchResult result = find_limit_cycle(spec, grad, f, 1);
    REQUIRE(result.outcome == OrbitSearchResult::Outcome::Converged);
    const std::vector<BoundCheck> checks = check_bounds(spec, f, *result.orbit);
    REQUIRE(checks.size() == 4);
    bool saw_velocity = false, saw_improved = false, saw_displacement = false, saw_sup = false;
    for (const BoundCheck& check : checks) {
        CHECK(check.pass);
        CHECK(check.slack >= -1e-9 * check.bound);
        CHECK(check.measured <= check.bound * (1.0 + 1e-9));
        saw_velocity |= check.name == "velocity_l2";
        saw_improved |= check.name == "velocity_l2_improved";
        saw_displacement |= check.name == "displacement_lr";
        saw_sup |= check.name == "position_linfty";
    }
    CHECK(saw_velocity);
    CHECK(saw_improved);
    CHECK(saw_displacement);
    CHECK(saw_sup);
}

TEST_CASE("linear systems check only the applicable bounds") {
    const SystemSpec spec = scalar_system(1.0, 1.0, 1.0);
    const TrigForcing f = TrigForcing::scalar_sine(1.0, 1.0);
    const OrbitSearchResult result =
        find_limit_cycle(spec, ConcretePotentialGradient::none(1), f, 1);
    REQUIRE(result.outcome == OrbitSearchResult::Outcome::Converged);
    const std::vector<BoundCheck> checks = check_bounds(spec, f, *result.orbit);
    REQUIRE(checks.size() == 2);
    CHECK(checks[0].name == "velocity_l2");
    CHECK(checks[1].name == "position_linfty");
    CHECK(checks[0].pass);
    CHECK(checks[1].pass);
}

TEST_CASE("softening escape is reported as divergence, not an error") {
    const SystemSpec spec = softening_duffing();
    const ConcretePotentialGradient grad =
        ConcretePotentialGradient::cubic(PotentialKind::Softening, 1.0, 1);
    const TrigForcing f = TrigForcing::scalar_sine(1.0, 1.0);
    // Start far outside the basin: the softening force accelerates outward.
    const OrbitSearchResult result = find_limit_cycle(spec, grad, f, 1, {5.0, 0.0});
    CHECK(result.outcome == OrbitSearchResult::Outcome::Diverged);
    CHECK(result.escape_time > 0.0);
    CHECK_FALSE(result.orbit.has_value());
}

TEST_CASE("integrate raises divergence errors with the escape time") {
    const SystemSpec spec = softening_duffing();
    const ConcretePotentialGradient grad =
        ConcretePotentialGradient::cubic(PotentialKind::Softening, 1.0, 1);
    const TrigForcing f = TrigForcing::scalar_sine(1.0, 1.0);
    CHECK_THROWS_AS(integrate(spec, grad, f, {50.0, 0.0}, 0.0, 200.0 * pi, 0.0),
                    DivergenceError);
}

TEST_CASE("a singular mass matrix cannot be integrated") {
    SystemSpec spec;
    spec.dimension = 2;
    spec.mass = Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
    spec.damping = Matrix::identity(2);
    spec.stiffness = Matrix::identity(2);
    const TrigForcing f = TrigForcing::zero(2, 2.0 * pi);
    CHECK_THROWS_AS(integrate(spec, ConcretePotentialGradient::none(2), f,
                              {0.0, 0.0, 0.0, 0.0}, 0.0, 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("orbit norms agree across N period multiples") {
    // The N-period orbit of a T-periodic attractor is the one-period orbit
    // repeated, so L^p norms scale by N^(1/p).
    const SystemSpec spec = hardening_duffing();
    const ConcretePotentialGradient grad =
        ConcretePotentialGradient::cubic(PotentialKind::Hardening, 1.0, 1);
    const TrigForcing f = TrigForcing::scalar_sine(0.3, 1.0);
    const OrbitSearchResult one = find_limit_cycle(spec, grad, f, 1);
    const OrbitSearchResult two = find_limit_cycle(spec, grad, f, 2);
    REQUIRE(one.outcome == OrbitSearchResult::Outcome::Converged);
    REQUIRE(two.outcome == OrbitSearchResult::Outcome::Converged);
    const double l2_one = orbit_lp_norm(*one.orbit, 2.0, OrbitComponent::Position);
    const double l2_two = orbit_lp_norm(*two.orbit, 2.0, OrbitComponent::Position);
    CHECK(l2_two == doctest::Approx(std::sqrt(2.0) * l2_one).epsilon(1e-8));
}

}  // TEST_SUITE
