#include <string>

#include "doctest.h"
#include "orbitbound/system_model.hpp"

using namespace orbitbound;

namespace {

bool mentions(const std::vector<std::string>& messages, const std::string& needle) {
    for (const std::string& m : messages)
        if (m.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_SUITE("system_model") {

TEST_CASE("a scalar damped system validates cleanly") {
    const SystemSpec spec =
        scalar_system(1.0, 0.1, 1.1, PotentialEnvelope::hardening(1.0, 4.0, 1.0));
    const ValidationResult v = validate(spec);
    CHECK(v.ok());
    CHECK(v.warnings.empty());
}

TEST_CASE("asymmetric stiffness is a violation") {
    SystemSpec spec = scalar_system(1.0, 0.1, 1.0);
    spec.dimension = 2;
    spec.mass = Matrix::identity(2);
    spec.damping = Matrix::identity(2);
    spec.stiffness = Matrix::from_rows({{1.0, 0.5}, {-0.5, 1.0}});
    const ValidationResult v = validate(spec);
    CHECK_FALSE(v.ok());
    CHECK(mentions(v.violations, "symmetric"));
}

TEST_CASE("damping must be strictly positive definite") {
    const SystemSpec spec = scalar_system(1.0, 0.0, 1.0);
    const ValidationResult v = validate(spec);
    CHECK_FALSE(v.ok());
    CHECK(mentions(v.violations, "positive definite"));
}

TEST_CASE("mass and stiffness must be positive semi-definite") {
    SystemSpec spec = scalar_system(-1.0, 0.1, 1.0);
    CHECK(mentions(validate(spec).violations, "semi-definite"));
    spec = scalar_system(1.0, 0.1, -1.0);
    CHECK(mentions(validate(spec).violations, "semi-definite"));
}

TEST_CASE("potential envelope parameters are validated") {
    CHECK(mentions(validate(scalar_system(1, 0.1, 1, PotentialEnvelope::hardening(1, 2, 1)))
                       .violations,
                   "exceed 2"));
    CHECK(mentions(validate(scalar_system(1, 0.1, 1, PotentialEnvelope::hardening(0, 4, 1)))
                       .violations,
                   "u0"));
    CHECK(mentions(validate(scalar_system(1, 0.1, 1, PotentialEnvelope::softening(1, 4, -1)))
                       .violations,
                   "U0"));
    SystemSpec spec = scalar_system(1, 0.1, 1);
    spec.domain_radius = 0.0;
    CHECK(mentions(validate(spec).violations, "radius"));
}

TEST_CASE("shape mismatches are structural errors with explicit shapes") {
    SystemSpec spec = scalar_system(1.0, 0.1, 1.0);
    spec.dimension = 2;
    spec.mass = Matrix::identity(2);
    spec.damping = Matrix::identity(2);
    spec.stiffness = Matrix(2, 3, 1.0);
    const ValidationResult v = validate(spec);
    CHECK_FALSE(v.structural.empty());
    CHECK(mentions(v.structural, "2x3"));
    CHECK_THROWS_AS(eigen_bounds(spec), std::invalid_argument);
}

TEST_CASE("eigen bounds of the circulant pair") {
    SystemSpec spec;
    spec.dimension = 2;
    spec.mass = Matrix::identity(2);
    spec.damping = Matrix::from_rows({{0.3, 0.1}, {0.1, 0.3}});
    spec.stiffness = Matrix::from_rows({{2.0, 1.0}, {1.0, 2.0}});
    const EigenBounds eb = eigen_bounds(spec);
    CHECK(eb.m_min == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(eb.m_max == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(eb.c_min == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(eb.c_max == doctest::Approx(0.4).epsilon(1e-13));
    CHECK(eb.k_min == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(eb.k_max == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("semi-definite stiffness yields a zero lower eigen bound") {
    SystemSpec spec;
    spec.dimension = 2;
    spec.mass = Matrix::identity(2);
    spec.damping = Matrix::identity(2);
    spec.stiffness = Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}});
    CHECK(validate(spec).ok());
    const EigenBounds eb = eigen_bounds(spec);
    CHECK(eb.k_min == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eb.k_max == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("singular mass produces a warning, not a violation") {
    SystemSpec spec;
    spec.dimension = 2;
    spec.mass = Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
    spec.damping = Matrix::identity(2);
    spec.stiffness = Matrix::identity(2);
    const ValidationResult v = validate(spec);
    CHECK(v.ok());
    CHECK_FALSE(v.warnings.empty());
}

TEST_CASE("potential kind round-trips through strings") {
    for (const PotentialKind kind :
         {PotentialKind::None, PotentialKind::Hardening, PotentialKind::Softening})
        CHECK(potential_kind_from_string(to_string(kind)) == kind);
    CHECK_THROWS(potential_kind_from_string("quartic"));
}

}  // TEST_SUITE
