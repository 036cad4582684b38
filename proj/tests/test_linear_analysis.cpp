#include <cmath>
#include <numbers>

#include "doctest.h"
#include "orbitbound/linear_analysis.hpp"

using namespace orbitbound;

namespace {

constexpr double pi = std::numbers::pi;

SystemSpec circulant_2d() {
    SystemSpec spec;
    spec.dimension = 2;
    spec.mass = Matrix::identity(2);
    spec.damping = Matrix::from_rows({{0.3, 0.1}, {0.1, 0.3}});
    spec.stiffness = Matrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
    spec.domain_radius = 5.0;
    return spec;
}

double ode_residual_sup(const SystemSpec& spec, const TrigForcing& x, const TrigForcing& f) {
    const TrigForcing ddx = x.derivative(2);
    const TrigForcing dx = x.derivative();
    const std::vector<CombineTerm> terms = {CombineTerm{1.0, &spec.mass, &ddx},
                                            CombineTerm{1.0, &spec.damping, &dx},
                                            CombineTerm{1.0, &spec.stiffness, &x},
                                            CombineTerm{-1.0, nullptr, &f}};
    return lp_norm(combine(terms), infinite_p);
}

}  // namespace

TEST_SUITE("linear_analysis") {

TEST_CASE("scalar resonant-denominator golden solution") {
    // x'' + x' + x = sin t has the exact periodic solution x = -cos t.
    const SystemSpec spec = scalar_system(1.0, 1.0, 1.0);
    const TrigForcing f = TrigForcing::scalar_sine(1.0, 1.0);
    const HarmonicSolution sol = solve_harmonics(spec, f);
    REQUIRE_FALSE(sol.has_resonance());
    const ComplexVector* c1 = sol.coefficient(1);
    REQUIRE(c1 != nullptr);
    CHECK(std::abs((*c1)[0] - Complex(-0.5, 0.0)) <= 1e-13);

    for (const double t : {0.0, 0.7, 2.5, 5.0})
        CHECK(reconstruct(sol, t)[0] == doctest::Approx(-std::cos(t)).epsilon(1e-12));

    // ||cos||_L2(0,2pi) = sqrt(pi)
    CHECK(parseval_l2(sol, f.period()) == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
    // Escape amplitude for a unit validity ball: sqrt(T)/||x||_L2 = sqrt(2).
    CHECK(linear_escape_amplitude(spec, f) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("time-domain reconstruction satisfies the ODE") {
    const SystemSpec spec = circulant_2d();
    const TrigForcing f(2.0 * pi, {0.1, -0.2},
                        {Harmonic{1, {0.0, 0.5}, {1.0, 0.0}}, Harmonic{3, {0.0, 0.0}, {0.0, 0.25}}});
    const HarmonicSolution sol = solve_harmonics(spec, f);
    REQUIRE_FALSE(sol.has_resonance());
    CHECK(ode_residual_sup(spec, to_trig_forcing(sol), f) <= 1e-10);
}

TEST_CASE("mean equation solves the stiffness system") {
    const SystemSpec spec = circulant_2d();
    const TrigForcing f(1.0, {1.0, 0.0});
    const HarmonicSolution sol = solve_harmonics(spec, f);
    const ComplexVector* c0 = sol.coefficient(0);
    REQUIRE(c0 != nullptr);
    // K xhat0 = (1,0): inverse of [[2,1],[1,2]] gives (2/3, -1/3).
    CHECK(std::abs((*c0)[0] - Complex(2.0 / 3.0, 0.0)) <= 1e-12);
    CHECK(std::abs((*c0)[1] - Complex(-1.0 / 3.0, 0.0)) <= 1e-12);
}

TEST_CASE("singular stiffness with incompatible mean forcing is resonant") {
    SystemSpec spec;
    spec.dimension = 2;
    spec.mass = Matrix::identity(2);
    spec.damping = Matrix::identity(2);
    spec.stiffness = Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
    const TrigForcing f(2.0 * pi, {0.0, 1.0}, {Harmonic{1, {0.0, 0.0}, {1.0, 0.0}}});
    const HarmonicSolution sol = solve_harmonics(spec, f);
    CHECK(sol.has_resonance());
    REQUIRE(sol.resonant.size() == 1);
    CHECK(sol.resonant[0] == 0);
    CHECK_THROWS_AS(parseval_l2(sol, f.period()), ResonantSolutionError);
    CHECK_THROWS_AS(linear_escape_amplitude(spec, f), ResonantSolutionError);
}

TEST_CASE("singular stiffness with compatible mean forcing is flagged near-singular") {
    SystemSpec spec;
    spec.dimension = 2;
    spec.mass = Matrix::identity(2);
    spec.damping = Matrix::identity(2);
    spec.stiffness = Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
    const TrigForcing f(2.0 * pi, {1.0, 0.0}, {Harmonic{1, {0.0, 0.0}, {1.0, 0.0}}});
    const HarmonicSolution sol = solve_harmonics(spec, f);
    CHECK_FALSE(sol.has_resonance());
    REQUIRE(sol.near_singular.size() == 1);
    CHECK(sol.near_singular[0] == 0);
    const ComplexVector* c0 = sol.coefficient(0);
    REQUIRE(c0 != nullptr);
    CHECK(std::abs((*c0)[0] - Complex(1.0, 0.0)) <= 1e-10);  // minimal-norm solution
    CHECK(std::abs((*c0)[1]) <= 1e-10);
}

TEST_CASE("zero forcing yields a zero response and no escape amplitude") {
    const SystemSpec spec = scalar_system(1.0, 0.5, 2.0);
    const TrigForcing f = TrigForcing::zero(1, 2.0 * pi);
    const HarmonicSolution sol = solve_harmonics(spec, f);
    CHECK(parseval_l2(sol, f.period()) == doctest::Approx(0.0));
    CHECK_THROWS_AS(linear_escape_amplitude(spec, f), ZeroResponseError);
}

TEST_CASE("escape amplitude scales inversely with the unit response") {
    // Doubling the forcing halves the amplitude at which the response fills
    // the validity ball.
    const SystemSpec spec = scalar_system(1.0, 0.1, 1.1);
    const TrigForcing f = TrigForcing::scalar_sine(1.0, 1.0);
    const double a1 = linear_escape_amplitude(spec, f);
    const double a2 = linear_escape_amplitude(spec, f.scaled(2.0));
    CHECK(a2 == doctest::Approx(a1 / 2.0).epsilon(1e-12));
    // The worked scalar example: |xhat_1| = 0.5/sqrt(0.02), ball radius 1.
    CHECK(a1 == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("harmonic indices always include the mean and stay ascending") {
    const SystemSpec spec = scalar_system(1.0, 0.1, 1.1);
    const TrigForcing f(2.0 * pi, {0.0}, {Harmonic{5, {1.0}, {0.0}}, Harmonic{2, {0.0}, {1.0}}});
    const HarmonicSolution sol = solve_harmonics(spec, f);
    REQUIRE(sol.indices.size() == 3);
    CHECK(sol.indices[0] == 0);
    CHECK(sol.indices[1] == 2);
    CHECK(sol.indices[2] == 5);
}

}  // TEST_SUITE
