#pragma once

#include <optional>
#include <string>

#include "orbitbound/forcing.hpp"
#include "orbitbound/system_model.hpp"

namespace orbitbound {

/// Raised when a bound or criterion is requested for the wrong potential
/// branch (e.g. a hardening displacement bound on a softening spec).
class WrongBranchError : public std::logic_error {
public:
    explicit WrongBranchError(const std::string& what) : std::logic_error(what) {}
};

/// The scalar polynomial P(y) = leading * y^exponent - linear * y - constant
/// whose unique positive root caps the one-period L^r displacement norm on
/// the softening branch. leading > 0, linear >= 0, constant > 0,
/// exponent >= 2; the linear coefficient degenerates to zero exactly when
/// the stiffness matrix vanishes.
struct SofteningPoly {
    double leading = 0.0;   ///< u0
    double linear = 0.0;    ///< k_max * T^((r-2)/r)
    double constant = 0.0;  ///< ||f||_{L^{r*}(0,T)}
    double exponent = 0.0;  ///< s = r - 1

    double value(double y) const;
    double slope(double y) const;
    double curvature(double y) const;
};

/// Builds the softening root polynomial for one period of the forcing.
SofteningPoly softening_poly(const SystemSpec& spec, const TrigForcing& f);

/// The stationary point ybar = (linear / (exponent * leading))^(1/(exponent-1))
/// of the polynomial, below which P is decreasing; 0 when linear == 0.
double stationary_point(const SofteningPoly& poly);

/// Parabola bound: ybar + sqrt(2 |P(ybar)| / P''(ybar)) >= positive root.
/// Requires linear > 0 (the curvature vanishes at ybar = 0 otherwise) and
/// P(ybar) < 0, which holds for every admissible polynomial; a non-negative
/// P(ybar) indicates an internally inconsistent polynomial and raises
/// NumericalError.
double parabolic_root_bound(const SofteningPoly& poly);

/// Lagrange-style bound max(1, (linear + constant) / leading) >= positive root.
double lagrange_root_bound(const SofteningPoly& poly);

/// The unique positive root y* of the polynomial, bisected inside
/// [ybar, parabolic bound] and polished by Newton steps; satisfies
/// |P(y*)| <= 1e-12 * (leading y*^s + linear y* + constant).
double positive_root(const SofteningPoly& poly);

/// Basic energy bound on the periodic velocity over N periods:
/// ||v||_L2(0,NT) <= sqrt(N) / c_min * ||f - mean(f)||_L2(0,T).
/// Constant forcing makes the bound vanish; the flag records that degeneracy.
struct VelocityBound {
    double value = 0.0;
    bool constant_forcing = false;
};
VelocityBound velocity_l2_bound(const SystemSpec& spec, const TrigForcing& f, int periods);

/// Hardening displacement bound over N periods:
/// ||x||_Lr(0,NT) <= N^(1/r) u0^(-1/(r-1)) ||f - (m_max/c_min) f'||_{r*}^(1/(r-1)).
double hardening_lr_bound(const SystemSpec& spec, const TrigForcing& f, int periods);

/// Softening displacement bound over N periods: N^(1/r) times the positive
/// root of the one-period softening polynomial.
double softening_lr_bound(const SystemSpec& spec, const TrigForcing& f, int periods);

/// Velocity bound with the improved forcing-amplitude exponent; branch is
/// dispatched on the system's potential kind (None raises WrongBranchError).
/// Constant forcing again yields 0.
double improved_velocity_bound(const SystemSpec& spec, const TrigForcing& f, int periods);

/// Sup-norm excursion bound along the orbit through x0:
/// ||x||_inf <= |x0| + N sqrt(T) / c_min * ||f - mean(f)||_L2(0,T).
double linfty_orbit_bound(const SystemSpec& spec, const TrigForcing& f, int periods,
                          double initial_magnitude);

/// Every a-priori bound that applies to the system, with the labeled
/// intermediate norms that enter them.
struct LabeledValue {
    std::string label;
    double value = 0.0;
};

struct BoundReport {
    int periods = 1;
    std::string branch;                          ///< "none", "hardening" or "softening"
    bool constant_forcing = false;
    double velocity_l2 = 0.0;
    std::optional<double> velocity_l2_improved;  ///< absent for branch "none"
    std::optional<double> displacement_lr;       ///< absent for branch "none"
    double position_linfty = 0.0;
    double initial_magnitude = 0.0;
    std::optional<SofteningPoly> poly;           ///< softening branch only
    std::vector<LabeledValue> intermediates;
};

BoundReport make_bound_report(const SystemSpec& spec, const TrigForcing& f, int periods,
                              double initial_magnitude = 0.0);

}  // namespace orbitbound
