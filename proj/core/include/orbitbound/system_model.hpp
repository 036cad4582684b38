#pragma once

#include <string>
#include <vector>

#include "orbitbound/linalg.hpp"

namespace orbitbound {

enum class PotentialKind { None, Hardening, Softening };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

/// Growth envelope for the potential gradient: on the validity ball of radius
/// SystemSpec::domain_radius,
///   hardening:  grad U(x) . x >=  growth_coef * |x|^growth_exponent
///   softening:  grad U(x) . x <= -growth_coef * |x|^growth_exponent
/// and |grad U(x)| <= gradient_bound throughout. Kind None models a purely
/// linear system with no potential term.
struct PotentialEnvelope {
    PotentialKind kind = PotentialKind::None;
    double growth_coef = 0.0;      ///< u0 > 0 when kind != None.
    double growth_exponent = 0.0;  ///< r > 2 when kind != None.
    double gradient_bound = 0.0;   ///< U0 > 0 when kind != None.

    static PotentialEnvelope none();
    static PotentialEnvelope hardening(double u0, double r, double U0);
    static PotentialEnvelope softening(double u0, double r, double U0);
};

/// A forced-damped mechanical system M x'' + C x' + K x = -grad U(x) + f(t)
/// with symmetric M, K (positive semi-definite) and symmetric C (strictly
/// positive definite), plus the potential envelope valid on the ball of
/// radius domain_radius.
struct SystemSpec {
    int dimension = 0;
    Matrix mass;
    Matrix damping;
    Matrix stiffness;
    PotentialEnvelope potential;
    double domain_radius = 1.0;
};

/// Convenience constructor for single-degree-of-freedom systems; scalar
/// systems flow through the same matrix code paths as larger ones.
SystemSpec scalar_system(double m, double c, double k,
                         PotentialEnvelope potential = PotentialEnvelope::none(),
                         double domain_radius = 1.0);

/// Outcome of validate(). Structural problems (wrong shapes, non-finite
/// entries) make the system description unusable; violations are broken model assumptions;
/// warnings are admissible but noteworthy states such as a singular mass
/// matrix, which leaves the frequency-domain analysis defined but rules out
/// time integration.
struct ValidationResult {
    std::vector<std::string> structural;
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const { return structural.empty() && violations.empty(); }
};

ValidationResult validate(const SystemSpec& spec);

/// Extreme eigenvalues of M, C, K.
struct EigenBounds {
    double m_min = 0.0, m_max = 0.0;
    double c_min = 0.0, c_max = 0.0;
    double k_min = 0.0, k_max = 0.0;
};

/// Computes extreme eigenvalues via cyclic Jacobi. Requires a system that
/// passed validate(); round-off negatives of the semi-definite matrices
/// (eigenvalues within -1e-12 times the largest magnitude) are clamped to 0.
EigenBounds eigen_bounds(const SystemSpec& spec);

}  // namespace orbitbound
