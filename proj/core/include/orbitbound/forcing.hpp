#pragma once

#include <limits>
#include <span>
#include <vector>

#include "orbitbound/linalg.hpp"

namespace orbitbound {

/// One Fourier mode n >= 1 of a vector-valued trigonometric polynomial:
/// cos_coef * cos(n w t) + sin_coef * sin(n w t) with w = 2 pi / period.
struct Harmonic {
    int index = 1;
    Vector cos_coef;
    Vector sin_coef;
};

/// Finite trigonometric polynomial f(t) = mean + sum of harmonics, the class
/// of periodic forcings every bound and criterion in this library accepts.
/// Immutable after construction; harmonics are kept sorted by index.
class TrigForcing {
public:
    /// Validates period > 0, distinct indices >= 1 and consistent dimensions.
    TrigForcing(double period, Vector mean, std::vector<Harmonic> harmonics = {});

    static TrigForcing zero(int dimension, double period);
    /// Scalar convenience: amplitude * sin(n w t) with period 2 pi / w.
    static TrigForcing scalar_sine(double amplitude, double omega, int n = 1);

    int dimension() const { return static_cast<int>(mean_.size()); }
    double period() const { return period_; }
    double fundamental_frequency() const;  ///< 2 pi / period
    const Vector& mean() const { return mean_; }
    const std::vector<Harmonic>& harmonics() const { return harmonics_; }
    int max_harmonic_index() const;  ///< 0 when no harmonics are present.

    Vector evaluate(double t) const;
    /// Termwise time derivative of the given order (order >= 1).
    TrigForcing derivative(int order = 1) const;
    /// Same signal with the mean removed.
    TrigForcing mean_free() const;
    TrigForcing scaled(double factor) const;
    /// True when the oscillating part is negligible against the whole signal:
    /// the coefficient-space L2 norm of mean_free() is <= rel_tol times that
    /// of the full signal. The zero signal counts as constant.
    bool effectively_constant(double rel_tol = 1e-14) const;

private:
    double period_ = 0.0;
    Vector mean_;
    std::vector<Harmonic> harmonics_;
};

/// An L^p(0, N*period) norm request; p may be infinity.
struct NormRequest {
    double p = 2.0;
    int periods = 1;
};

/// L^p norm of |f(t)| (Euclidean magnitude) over N periods.
///
/// Finite p uses composite Gauss-Legendre panels split at component sign
/// changes, so |f|^p is smooth on every panel; the one-period result is
/// scaled to N periods analytically as N^(1/p). p = infinity is a dense
/// scan refined by golden-section search. Requires p >= 1 (domain_error
/// otherwise, including nan).
double lp_norm(const TrigForcing& f, const NormRequest& request);
double lp_norm(const TrigForcing& f, double p, int periods = 1);

/// L2 norm over N periods evaluated in coefficient space via the Parseval
/// identity: sqrt(N T (|mean|^2 + sum (|a_n|^2 + |b_n|^2) / 2)). Independent
/// of the quadrature path above; the two must agree for any trig polynomial.
double l2_norm_coefficients(const TrigForcing& f, int periods = 1);

/// Dual exponent r* = r / (r - 1) for r > 1; an involution.
double dual_exponent(double r);

/// One summand of a linear combination: scale * matrix * forcing, with the
/// matrix optional (identity when null).
struct CombineTerm {
    double scale = 1.0;
    const Matrix* matrix = nullptr;
    const TrigForcing* forcing = nullptr;
};

/// Coefficient-wise linear combination of forcings sharing dimension and
/// period. Harmonics whose combined coefficients are exactly zero are pruned.
TrigForcing combine(std::span<const CombineTerm> terms);

inline constexpr double infinite_p = std::numeric_limits<double>::infinity();

}  // namespace orbitbound
