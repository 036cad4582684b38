#pragma once

#include <optional>

#include "orbitbound/forcing.hpp"
#include "orbitbound/system_model.hpp"

namespace orbitbound {

/// Raised when a quantity of the periodic linear response is requested while
/// unsolvable resonant harmonics are present.
class ResonantSolutionError : public std::runtime_error {
public:
    explicit ResonantSolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when the linear response to the given forcing is identically zero,
/// so no finite forcing amplitude can drive it out of the validity ball.
class ZeroResponseError : public std::runtime_error {
public:
    explicit ZeroResponseError(const std::string& what) : std::runtime_error(what) {}
};

/// Complex Fourier coefficients x_n of the periodic solution of the linear
/// part M x'' + C x' + K x = f. Index 0 carries the static (mean) response;
/// negative indices follow by conjugation and are not stored.
struct HarmonicSolution {
    int dimension = 0;
    double period = 0.0;
    std::vector<int> indices;                 ///< Ascending, always contains 0.
    std::vector<ComplexVector> coefficients;  ///< Parallel to indices.
    std::vector<int> resonant;                ///< Harmonics with no solution.
    std::vector<int> near_singular;           ///< Flagged solvable near-resonances.

    bool has_resonance() const { return !resonant.empty(); }
    const ComplexVector* coefficient(int n) const;
};

/// Solves (K - (n w)^2 M + i n w C) x_n = f_n for every stored harmonic of f
/// (w = fundamental frequency). Harmonics whose system matrix has a smallest
/// singular value below 1e-10 times its largest are routed through a
/// minimal-norm least-squares solve: if the residual stays within 1e-10 of
/// |f_n| the harmonic is solvable and flagged near_singular, otherwise it is
/// recorded as resonant.
HarmonicSolution solve_harmonics(const SystemSpec& spec, const TrigForcing& f);

/// L2(0, T) norm of the response by the Parseval identity,
/// sqrt(T sum over all integer n of |x_n|^2). Raises ResonantSolutionError
/// when unsolvable harmonics are present.
double parseval_l2(const HarmonicSolution& solution, double period);

/// Real trigonometric form of the response (conjugate symmetry folded in).
TrigForcing to_trig_forcing(const HarmonicSolution& solution);

/// Time-domain reconstruction x(t) of the response.
Vector reconstruct(const HarmonicSolution& solution, double t);

/// Smallest scaling of the unit forcing whose periodic linear response leaves
/// the validity ball in the time-averaged sense:
/// A* = domain_radius * sqrt(T) / ||x_unit||_L2(0,T).
double linear_escape_amplitude(const SystemSpec& spec, const TrigForcing& unit_forcing);

}  // namespace orbitbound
