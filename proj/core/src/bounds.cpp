#include "orbitbound/bounds.hpp"

#include <cmath>

namespace orbitbound {

namespace {

void require_branch(const SystemSpec& spec, PotentialKind kind, const char* who) {
    if (spec.potential.kind != kind)
        throw WrongBranchError(std::string(who) + ": spec potential kind is " +
                               to_string(spec.potential.kind) + ", expected " + to_string(kind));
}

void require_nonlinear(const SystemSpec& spec, const char* who) {
    if (spec.potential.kind == PotentialKind::None)
        throw WrongBranchError(std::string(who) + ": spec has no potential envelope");
}

/// f - (m_max / c_min) f', the combination whose dual norm controls the
/// displacement on the hardening branch.
TrigForcing damped_combination(const SystemSpec& spec, const TrigForcing& f,
                               const EigenBounds& eb) {
    const TrigForcing df = f.derivative();
    const CombineTerm terms[] = {{1.0, nullptr, &f}, {-eb.m_max / eb.c_min, nullptr, &df}};
    return combine(terms);
}

}  // namespace

// ---------------------------------------------------------------------------
// Softening root polynomial
// ---------------------------------------------------------------------------

double SofteningPoly::value(double y) const {
    return leading * std::pow(y, exponent) - linear * y - constant;
}

double SofteningPoly::slope(double y) const {
    return leading * exponent * std::pow(y, exponent - 1.0) - linear;
}

double SofteningPoly::curvature(double y) const {
    return leading * exponent * (exponent - 1.0) * std::pow(y, exponent - 2.0);
}

SofteningPoly softening_poly(const SystemSpec& spec, const TrigForcing& f) {
    require_branch(spec, PotentialKind::Softening, "softening_poly");
    const EigenBounds eb = eigen_bounds(spec);
    const double r = spec.potential.growth_exponent;
    const double T = f.period();

    SofteningPoly poly;
    poly.leading = spec.potential.growth_coef;
    poly.linear = eb.k_max * std::pow(T, (r - 2.0) / r);
    poly.constant = lp_norm(f, dual_exponent(r));
    poly.exponent = r - 1.0;
    if (!(poly.constant > 0.0))
        throw std::invalid_argument("softening_poly: forcing has zero dual norm");
    return poly;
}

double stationary_point(const SofteningPoly& poly) {
    if (!(poly.leading > 0.0) || !(poly.exponent >= 2.0))
        throw std::invalid_argument("stationary_point: invalid polynomial");
    if (poly.linear == 0.0) return 0.0;
    return std::pow(poly.linear / (poly.exponent * poly.leading), 1.0 / (poly.exponent - 1.0));
}

double parabolic_root_bound(const SofteningPoly& poly) {
    if (!(poly.linear > 0.0))
        throw std::domain_error("parabolic_root_bound: requires a positive linear coefficient");
    const double ybar = stationary_point(poly);
    const double p_bar = poly.value(ybar);
    if (p_bar >= 0.0)
        throw NumericalError("parabolic_root_bound: P(ybar) >= 0, polynomial inconsistent");
    const double curv = poly.curvature(ybar);
    return ybar + std::sqrt(2.0 * std::abs(p_bar) / curv);
}

double lagrange_root_bound(const SofteningPoly& poly) {
    if (!(poly.leading > 0.0))
        throw std::invalid_argument("lagrange_root_bound: invalid polynomial");
    return std::max(1.0, (poly.linear + poly.constant) / poly.leading);
}

double positive_root(const SofteningPoly& poly) {
    if (!(poly.leading > 0.0) || poly.linear < 0.0 || !(poly.constant > 0.0) ||
        !(poly.exponent >= 2.0))
        throw std::invalid_argument("positive_root: invalid polynomial");
    if (poly.linear == 0.0)
        return std::pow(poly.constant / poly.leading, 1.0 / poly.exponent);

    // P is decreasing on [0, ybar] with P(0) < 0, so the unique positive root
    // lies in [ybar, y+]; bisect, then polish with a few Newton steps.
    double lo = stationary_point(poly);
    double hi = parabolic_root_bound(poly);
    const double width_tol = 1e-13 * hi;
    while (hi - lo > width_tol) {
        const double mid = 0.5 * (lo + hi);
        if (poly.value(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double root = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double dp = poly.slope(root);
        if (dp <= 0.0) break;
        const double next = root - poly.value(root) / dp;
        if (!(next > lo) || !(next < hi)) break;
        root = next;
    }
    return root;
}

// ---------------------------------------------------------------------------
// A-priori bounds
// ---------------------------------------------------------------------------

VelocityBound velocity_l2_bound(const SystemSpec& spec, const TrigForcing& f, int periods) {
    if (periods < 1) throw std::invalid_argument("velocity_l2_bound: periods must be >= 1");
    if (f.effectively_constant()) return {0.0, true};
    const EigenBounds eb = eigen_bounds(spec);
    const double norm = lp_norm(f.mean_free(), 2.0);
    return {std::sqrt(static_cast<double>(periods)) / eb.c_min * norm, false};
}

double hardening_lr_bound(const SystemSpec& spec, const TrigForcing& f, int periods) {
    require_branch(spec, PotentialKind::Hardening, "hardening_lr_bound");
    if (periods < 1) throw std::invalid_argument("hardening_lr_bound: periods must be >= 1");
    const EigenBounds eb = eigen_bounds(spec);
    const double r = spec.potential.growth_exponent;
    const double u0 = spec.potential.growth_coef;
    const double norm = lp_norm(damped_combination(spec, f, eb), dual_exponent(r));
    return std::pow(static_cast<double>(periods), 1.0 / r) * std::pow(u0, -1.0 / (r - 1.0)) *
           std::pow(norm, 1.0 / (r - 1.0));
}

double softening_lr_bound(const SystemSpec& spec, const TrigForcing& f, int periods) {
    if (periods < 1) throw std::invalid_argument("softening_lr_bound: periods must be >= 1");
    const double r = spec.potential.growth_exponent;
    return std::pow(static_cast<double>(periods), 1.0 / r) * positive_root(softening_poly(spec, f));
}

double improved_velocity_bound(const SystemSpec& spec, const TrigForcing& f, int periods) {
    require_nonlinear(spec, "improved_velocity_bound");
    if (periods < 1) throw std::invalid_argument("improved_velocity_bound: periods must be >= 1");
    if (f.effectively_constant()) return 0.0;

    const EigenBounds eb = eigen_bounds(spec);
    const double r = spec.potential.growth_exponent;
    const double rstar = dual_exponent(r);
    const double derivative_norm = lp_norm(f.derivative(), rstar);
    const double n = static_cast<double>(periods);

    if (spec.potential.kind == PotentialKind::Hardening) {
        const double u0 = spec.potential.growth_coef;
        const double combo_norm = lp_norm(damped_combination(spec, f, eb), rstar);
        return std::pow(u0, -1.0 / (2.0 * (r - 1.0))) * std::sqrt(n / eb.c_min) *
               std::sqrt(derivative_norm) * std::pow(combo_norm, 1.0 / (2.0 * (r - 1.0)));
    }
    // Softening: sqrt of the one-period root; equals the N-period polynomial
    // formulation N^(1/(2 r*)) sqrt(z*) through z* = N^(1/r) y*.
    const double root = positive_root(softening_poly(spec, f));
    return std::sqrt(n / eb.c_min) * std::sqrt(derivative_norm) * std::sqrt(root);
}

double linfty_orbit_bound(const SystemSpec& spec, const TrigForcing& f, int periods,
                          double initial_magnitude) {
    if (periods < 1) throw std::invalid_argument("linfty_orbit_bound: periods must be >= 1");
    if (initial_magnitude < 0.0)
        throw std::invalid_argument("linfty_orbit_bound: initial magnitude must be >= 0");
    const EigenBounds eb = eigen_bounds(spec);
    const double norm = f.effectively_constant() ? 0.0 : lp_norm(f.mean_free(), 2.0);
    return initial_magnitude +
           static_cast<double>(periods) * std::sqrt(f.period()) / eb.c_min * norm;
}

BoundReport make_bound_report(const SystemSpec& spec, const TrigForcing& f, int periods,
                              double initial_magnitude) {
    BoundReport report;
    report.periods = periods;
    report.branch = to_string(spec.potential.kind);
    report.initial_magnitude = initial_magnitude;
    report.constant_forcing = f.effectively_constant();

    const VelocityBound vb = velocity_l2_bound(spec, f, periods);
    report.velocity_l2 = vb.value;
    report.position_linfty = linfty_orbit_bound(spec, f, periods, initial_magnitude);

    report.intermediates.push_back({"l2_mean_free", lp_norm(f.mean_free(), 2.0)});
    report.intermediates.push_back({"l1", lp_norm(f, 1.0)});

    if (spec.potential.kind == PotentialKind::None) return report;

    const double r = spec.potential.growth_exponent;
    const double rstar = dual_exponent(r);
    report.intermediates.push_back({"lrstar_forcing", lp_norm(f, rstar)});
    report.intermediates.push_back({"lrstar_derivative", lp_norm(f.derivative(), rstar)});

    const EigenBounds eb = eigen_bounds(spec);
    report.intermediates.push_back(
        {"lrstar_damped_combination", lp_norm(damped_combination(spec, f, eb), rstar)});

    if (!report.constant_forcing) report.velocity_l2_improved = improved_velocity_bound(spec, f, periods);

    if (spec.potential.kind == PotentialKind::Hardening) {
        report.displacement_lr = hardening_lr_bound(spec, f, periods);
    } else {
        const SofteningPoly poly = softening_poly(spec, f);
        report.poly = poly;
        const double root = positive_root(poly);
        report.displacement_lr = std::pow(static_cast<double>(periods), 1.0 / r) * root;
        report.intermediates.push_back({"y_star", root});
        report.intermediates.push_back({"y_stationary", stationary_point(poly)});
        if (poly.linear > 0.0)
            report.intermediates.push_back({"y_parabolic", parabolic_root_bound(poly)});
        report.intermediates.push_back({"y_lagrange", lagrange_root_bound(poly)});
    }
    return report;
}

}  // namespace orbitbound
