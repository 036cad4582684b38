#include "orbitbound/linear_analysis.hpp"

#include <algorithm>
#include <cmath>

namespace orbitbound {

namespace {

constexpr double kSingularRatio = 1e-10;   // sigma_min / sigma_max flag threshold
constexpr double kResidualRatio = 1e-10;   // acceptable |A x - f_n| / |f_n|

ComplexMatrix system_matrix(const SystemSpec& spec, double omega_n) {
    const int d = spec.dimension;
    ComplexMatrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            a(i, j) = Complex(spec.stiffness(i, j) - omega_n * omega_n * spec.mass(i, j),
                              omega_n * spec.damping(i, j));
    return a;
}

double residual_norm(const ComplexMatrix& a, const ComplexVector& x, const ComplexVector& b) {
    ComplexVector r = a.apply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return euclidean_norm(std::span<const Complex>(r));
}

}  // namespace

const ComplexVector* HarmonicSolution::coefficient(int n) const {
    const auto it = std::lower_bound(indices.begin(), indices.end(), n);
    if (it == indices.end() || *it != n) return nullptr;
    return &coefficients[static_cast<std::size_t>(it - indices.begin())];
}

HarmonicSolution solve_harmonics(const SystemSpec& spec, const TrigForcing& f) {
    if (spec.dimension != f.dimension())
        throw std::invalid_argument("solve_harmonics: system and forcing dimension mismatch");
    const int d = spec.dimension;
    const double w = f.fundamental_frequency();

    HarmonicSolution sol;
    sol.dimension = d;
    sol.period = f.period();

    auto solve_one = [&](int n, const ComplexVector& rhs) {
        const ComplexMatrix a = system_matrix(spec, w * n);
        const ComplexSvd svd = jacobi_svd(a);
        const double sigma_max = svd.singular_values.front();
        const double sigma_min = svd.singular_values.back();
        const double rhs_norm = euclidean_norm(std::span<const Complex>(rhs));

        ComplexVector x;
        bool flagged = false;
        if (sigma_max > 0.0 && sigma_min >= kSingularRatio * sigma_max) {
            x = lu_solve(a, rhs);
            if (residual_norm(a, x, rhs) > kResidualRatio * rhs_norm) {
                // Escalate pathologically conditioned direct solves to the
                // minimal-norm route rather than returning a bad solution.
                const LeastSquaresSolution ls = svd_least_squares(svd, a, rhs, kSingularRatio);
                x = ls.x;
                flagged = true;
            }
        } else {
            const LeastSquaresSolution ls = svd_least_squares(svd, a, rhs, kSingularRatio);
            if (ls.residual > kResidualRatio * rhs_norm) {
                sol.resonant.push_back(n);
                sol.indices.push_back(n);
                sol.coefficients.emplace_back(d, Complex{});
                return;
            }
            x = ls.x;
            flagged = true;
        }
        if (flagged) sol.near_singular.push_back(n);
        sol.indices.push_back(n);
        sol.coefficients.push_back(std::move(x));
    };

    ComplexVector mean_rhs(d);
    for (int j = 0; j < d; ++j) mean_rhs[j] = Complex(f.mean()[j], 0.0);
    solve_one(0, mean_rhs);

    for (const Harmonic& h : f.harmonics()) {
        ComplexVector rhs(d);
        for (int j = 0; j < d; ++j) rhs[j] = Complex(0.5 * h.cos_coef[j], -0.5 * h.sin_coef[j]);
        solve_one(h.index, rhs);
    }

    // solve_one appends in ascending harmonic order already (0, then sorted
    // harmonics), so indices are sorted by construction.
    return sol;
}

double parseval_l2(const HarmonicSolution& solution, double period) {
    if (solution.has_resonance())
        throw ResonantSolutionError("parseval_l2: solution has unsolvable resonant harmonics");
    if (!(period > 0.0)) throw std::invalid_argument("parseval_l2: period must be positive");
    double sum = 0.0;
    for (std::size_t k = 0; k < solution.indices.size(); ++k) {
        double mag2 = 0.0;
        for (const Complex& c : solution.coefficients[k]) mag2 += std::norm(c);
        // Coefficients for -n mirror those for n by conjugation.
        sum += solution.indices[k] == 0 ? mag2 : 2.0 * mag2;
    }
    return std::sqrt(period * sum);
}

TrigForcing to_trig_forcing(const HarmonicSolution& solution) {
    if (solution.has_resonance())
        throw ResonantSolutionError("to_trig_forcing: solution has unsolvable resonant harmonics");
    const int d = solution.dimension;
    Vector mean(d, 0.0);
    std::vector<Harmonic> hs;
    for (std::size_t k = 0; k < solution.indices.size(); ++k) {
        const int n = solution.indices[k];
        const ComplexVector& c = solution.coefficients[k];
        if (n == 0) {
            for (int j = 0; j < d; ++j) mean[j] = c[j].real();
            continue;
        }
        Harmonic h{n, Vector(d), Vector(d)};
        for (int j = 0; j < d; ++j) {
            h.cos_coef[j] = 2.0 * c[j].real();
            h.sin_coef[j] = -2.0 * c[j].imag();
        }
        hs.push_back(std::move(h));
    }
    return TrigForcing(solution.period, std::move(mean), std::move(hs));
}

Vector reconstruct(const HarmonicSolution& solution, double t) {
    return to_trig_forcing(solution).evaluate(t);
}

double linear_escape_amplitude(const SystemSpec& spec, const TrigForcing& unit_forcing) {
    const HarmonicSolution sol = solve_harmonics(spec, unit_forcing);
    if (sol.has_resonance())
        throw ResonantSolutionError(
            "linear_escape_amplitude: resonant response grows without bound");
    const double response = parseval_l2(sol, unit_forcing.period());
    if (!(response > 0.0))
        throw ZeroResponseError("linear_escape_amplitude: forcing excites no response");
    return spec.domain_radius * std::sqrt(unit_forcing.period()) / response;
}

}  // namespace orbitbound
