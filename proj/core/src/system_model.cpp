#include "orbitbound/system_model.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

namespace orbitbound {

std::string to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::None: return "none";
        case PotentialKind::Hardening: return "hardening";
        case PotentialKind::Softening: return "softening";
    }
    return "none";
}

PotentialKind potential_kind_from_string(const std::string& name) {
    if (name == "none") return PotentialKind::None;
    if (name == "hardening") return PotentialKind::Hardening;
    if (name == "softening") return PotentialKind::Softening;
    throw std::invalid_argument("unknown potential kind: " + name);
}

PotentialEnvelope PotentialEnvelope::none() { return {}; }

PotentialEnvelope PotentialEnvelope::hardening(double u0, double r, double U0) {
    return {PotentialKind::Hardening, u0, r, U0};
}

PotentialEnvelope PotentialEnvelope::softening(double u0, double r, double U0) {
    return {PotentialKind::Softening, u0, r, U0};
}

SystemSpec scalar_system(double m, double c, double k, PotentialEnvelope potential,
                         double domain_radius) {
    SystemSpec spec;
    spec.dimension = 1;
    spec.mass = Matrix::from_rows({{m}});
    spec.damping = Matrix::from_rows({{c}});
    spec.stiffness = Matrix::from_rows({{k}});
    spec.potential = potential;
    spec.domain_radius = domain_radius;
    return spec;
}

namespace {

std::string shape_string(const Matrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

struct NamedMatrix {
    const char* name;
    const Matrix* matrix;
};

}  // namespace

ValidationResult validate(const SystemSpec& spec) {
    ValidationResult res;
    const int d = spec.dimension;
    if (d <= 0) {
        res.structural.push_back("dimension must be positive");
        return res;
    }

    const NamedMatrix named[] = {
        {"M", &spec.mass}, {"C", &spec.damping}, {"K", &spec.stiffness}};
    for (const auto& [name, matrix] : named) {
        if (matrix->rows() != d || matrix->cols() != d) {
            res.structural.push_back(std::string(name) + " has shape " + shape_string(*matrix) +
                                     ", expected " + std::to_string(d) + "x" + std::to_string(d));
            continue;
        }
        if (!matrix->all_finite())
            res.structural.push_back(std::string(name) + " contains non-finite entries");
    }
    if (!res.structural.empty()) return res;

    for (const auto& [name, matrix] : named) {
        const double scale = matrix->frobenius_norm();
        if (matrix->asymmetry() > 1e-12 * scale)
            res.violations.push_back(std::string(name) + " not symmetric");
    }

    auto extremes = [](const Matrix& m, const char* label) {
        const SymmetricEigen eig = jacobi_eigen(m, 1e-13, 100, label);
        return std::pair<double, double>{eig.values.front(), eig.values.back()};
    };

    const auto [c_min, c_max] = extremes(spec.damping, "C");
    if (c_min <= 0.0)
        res.violations.push_back("C not strictly positive definite (min eigenvalue " +
                                 std::to_string(c_min) + ")");

    for (const char* name : {"M", "K"}) {
        const Matrix& m = name[0] == 'M' ? spec.mass : spec.stiffness;
        const auto [lo, hi] = extremes(m, name);
        const double mag = std::max(std::abs(lo), std::abs(hi));
        if (lo < -1e-12 * mag)
            res.violations.push_back(std::string(name) + " not positive semi-definite (min eigenvalue " +
                                     std::to_string(lo) + ")");
        else if (name[0] == 'M' && lo <= 1e-12 * mag)
            res.warnings.push_back(
                "M is singular; frequency-domain analysis remains defined but time "
                "integration is unavailable");
    }

    if (spec.potential.kind != PotentialKind::None) {
        if (!(spec.potential.growth_exponent > 2.0))
            res.violations.push_back("growth exponent must exceed 2");
        if (!(spec.potential.growth_coef > 0.0))
            res.violations.push_back("growth coefficient u0 must be positive");
        if (!(spec.potential.gradient_bound > 0.0))
            res.violations.push_back("gradient bound U0 must be positive");
    }
    if (!(spec.domain_radius > 0.0))
        res.violations.push_back("domain radius must be positive");
    return res;
}

EigenBounds eigen_bounds(const SystemSpec& spec) {
    const int d = spec.dimension;
    if (d <= 0 || spec.mass.rows() != d || spec.damping.rows() != d || spec.stiffness.rows() != d ||
        !spec.mass.square() || !spec.damping.square() || !spec.stiffness.square())
        throw std::invalid_argument("eigen_bounds: spec has structural problems; run validate()");

    auto clamped_extremes = [](const Matrix& m, const char* label, bool clamp_to_psd) {
        const SymmetricEigen eig = jacobi_eigen(m, 1e-13, 100, label);
        double lo = eig.values.front();
        const double hi = eig.values.back();
        if (clamp_to_psd) {
            const double mag = std::max(std::abs(lo), std::abs(hi));
            if (lo < 0.0 && lo >= -1e-12 * mag) lo = 0.0;
        }
        return std::pair<double, double>{lo, hi};
    };

    EigenBounds out;
    std::tie(out.m_min, out.m_max) = clamped_extremes(spec.mass, "M", true);
    std::tie(out.c_min, out.c_max) = clamped_extremes(spec.damping, "C", false);
    std::tie(out.k_min, out.k_max) = clamped_extremes(spec.stiffness, "K", true);
    return out;
}

}  // namespace orbitbound
