#include "orbitbound/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace orbitbound {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre nodes as roots of P_n via Newton iteration on the
// three-term recurrence; machine-precision accurate for moderate n.
GaussRule make_gauss_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule& gauss_32() {
    static const GaussRule rule = make_gauss_rule(32);
    return rule;
}

}  // namespace

// ---------------------------------------------------------------------------
// TrigForcing
// ---------------------------------------------------------------------------

TrigForcing::TrigForcing(double period, Vector mean, std::vector<Harmonic> harmonics)
    : period_(period), mean_(std::move(mean)), harmonics_(std::move(harmonics)) {
    if (!(period_ > 0.0) || !std::isfinite(period_))
        throw std::invalid_argument("TrigForcing: period must be positive and finite");
    if (mean_.empty()) throw std::invalid_argument("TrigForcing: dimension must be positive");
    const auto d = mean_.size();
    std::set<int> seen;
    for (const Harmonic& h : harmonics_) {
        if (h.index < 1) throw std::invalid_argument("TrigForcing: harmonic index must be >= 1");
        if (!seen.insert(h.index).second)
            throw std::invalid_argument("TrigForcing: duplicate harmonic index " +
                                        std::to_string(h.index));
        if (h.cos_coef.size() != d || h.sin_coef.size() != d)
            throw std::invalid_argument("TrigForcing: harmonic coefficient dimension mismatch");
    }
    std::sort(harmonics_.begin(), harmonics_.end(),
              [](const Harmonic& a, const Harmonic& b) { return a.index < b.index; });
}

TrigForcing TrigForcing::zero(int dimension, double period) {
    if (dimension < 1) throw std::invalid_argument("TrigForcing::zero: dimension must be >= 1");
    return TrigForcing(period, Vector(dimension, 0.0));
}

TrigForcing TrigForcing::scalar_sine(double amplitude, double omega, int n) {
    if (!(omega > 0.0)) throw std::invalid_argument("scalar_sine: omega must be positive");
    Harmonic h{n, Vector{0.0}, Vector{amplitude}};
    return TrigForcing(two_pi / omega, Vector{0.0}, {h});
}

double TrigForcing::fundamental_frequency() const { return two_pi / period_; }

int TrigForcing::max_harmonic_index() const {
    return harmonics_.empty() ? 0 : harmonics_.back().index;
}

Vector TrigForcing::evaluate(double t) const {
    Vector value = mean_;
    const double w = fundamental_frequency();
    for (const Harmonic& h : harmonics_) {
        const double phase = h.index * w * t;
        const double cs = std::cos(phase), sn = std::sin(phase);
        for (std::size_t j = 0; j < value.size(); ++j)
            value[j] += h.cos_coef[j] * cs + h.sin_coef[j] * sn;
    }
    return value;
}

TrigForcing TrigForcing::derivative(int order) const {
    if (order < 1) throw std::invalid_argument("derivative: order must be >= 1");
    std::vector<Harmonic> hs = harmonics_;
    const double w = fundamental_frequency();
    for (int pass = 0; pass < order; ++pass) {
        for (Harmonic& h : hs) {
            const double rate = h.index * w;
            Vector new_cos(h.sin_coef), new_sin(h.cos_coef);
            for (double& x : new_cos) x *= rate;
            for (double& x : new_sin) x *= -rate;
            h.cos_coef = std::move(new_cos);
            h.sin_coef = std::move(new_sin);
        }
    }
    return TrigForcing(period_, Vector(mean_.size(), 0.0), std::move(hs));
}

TrigForcing TrigForcing::mean_free() const {
    return TrigForcing(period_, Vector(mean_.size(), 0.0), harmonics_);
}

TrigForcing TrigForcing::scaled(double factor) const {
    Vector m = mean_;
    for (double& x : m) x *= factor;
    std::vector<Harmonic> hs = harmonics_;
    for (Harmonic& h : hs) {
        for (double& x : h.cos_coef) x *= factor;
        for (double& x : h.sin_coef) x *= factor;
    }
    return TrigForcing(period_, std::move(m), std::move(hs));
}

bool TrigForcing::effectively_constant(double rel_tol) const {
    double oscillating = 0.0;
    for (const Harmonic& h : harmonics_)
        for (std::size_t j = 0; j < mean_.size(); ++j)
            oscillating += 0.5 * (h.cos_coef[j] * h.cos_coef[j] + h.sin_coef[j] * h.sin_coef[j]);
    double total = oscillating;
    for (double x : mean_) total += x * x;
    return std::sqrt(oscillating) <= rel_tol * std::sqrt(total);
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

namespace {

double component_at(const TrigForcing& f, int j, double t) { return f.evaluate(t)[j]; }

// Locates sign changes of one component by dense sampling plus bisection.
void append_component_roots(const TrigForcing& f, int j, std::vector<double>& roots) {
    const double T = f.period();
    const int samples = 64 * std::max(1, f.max_harmonic_index());
    const double width_tol = 1e-13 * T;
    double prev_t = 0.0;
    double prev_g = component_at(f, j, prev_t);
    for (int i = 1; i <= samples; ++i) {
        const double t = T * i / samples;
        const double g = component_at(f, j, t);
        if (prev_g == 0.0) {
            roots.push_back(prev_t);
        } else if (g != 0.0 && std::signbit(g) != std::signbit(prev_g)) {
            double a = prev_t, b = t, ga = prev_g;
            while (b - a > width_tol) {
                const double mid = 0.5 * (a + b);
                const double gm = component_at(f, j, mid);
                if (gm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (std::signbit(gm) == std::signbit(ga)) {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_t = t;
        prev_g = g;
    }
}

double magnitude_at(const TrigForcing& f, double t) {
    const Vector v = f.evaluate(t);
    return euclidean_norm(std::span<const double>(v));
}

double sup_norm(const TrigForcing& f) {
    const double T = f.period();
    const int samples = 4096 * std::max(1, f.max_harmonic_index());
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i < samples; ++i) {
        const double m = magnitude_at(f, T * i / samples);
        if (m > best) {
            best = m;
            best_i = i;
        }
    }
    // Golden-section refinement inside the bracketing pair of sample cells.
    double a = T * (best_i - 1) / samples;
    double b = T * (best_i + 1) / samples;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = magnitude_at(f, x1), f2 = magnitude_at(f, x2);
    for (int it = 0; it < 80 && (b - a) > 1e-14 * T; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = magnitude_at(f, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = magnitude_at(f, x1);
        }
    }
    return std::max(best, std::max(f1, f2));
}

}  // namespace

double lp_norm(const TrigForcing& f, const NormRequest& request) {
    return lp_norm(f, request.p, request.periods);
}

double lp_norm(const TrigForcing& f, double p, int periods) {
    if (periods < 1) throw std::invalid_argument("lp_norm: periods must be >= 1");
    if (std::isinf(p) && p > 0.0) return sup_norm(f);
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: requires p >= 1");

    const double T = f.period();
    // Uniform base panels resolve smooth oscillation; sign-change roots are
    // added so that |f|^p is smooth inside every panel even for p near 1.
    std::vector<double> cuts;
    const int base = 4 * std::max(1, f.max_harmonic_index());
    cuts.reserve(base + 1);
    for (int i = 0; i <= base; ++i) cuts.push_back(T * i / base);
    for (int j = 0; j < f.dimension(); ++j) append_component_roots(f, j, cuts);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double a, double b) { return b - a <= 1e-12 * T; }),
               cuts.end());
    if (cuts.back() < T - 1e-12 * T) cuts.push_back(T);

    const GaussRule& rule = gauss_32();
    const auto integrate_cell = [&](double a, double b) {
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double cell = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            cell += rule.weights[i] * std::pow(magnitude_at(f, mid + half * rule.nodes[i]), p);
        return half * cell;
    };

    // |f|^p is analytic inside each panel but only Hoelder-smooth at the
    // breakpoints when p is fractional (|t - root|^p behaviour), which caps
    // plain Gauss panels at ~1e-8 relative accuracy for p near 1. Dyadic
    // grading towards both panel ends restores near machine accuracy: every
    // graded cell sits a cell-width away from the singularity, so the fixed
    // 32-node rule is back in its analytic regime on each cell.
    constexpr int grading_levels = 12;
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        const double mid = 0.5 * (a + b);
        for (int level = 0; level < grading_levels; ++level) {
            const double outer = std::ldexp(1.0, -level);
            const double inner = std::ldexp(1.0, -(level + 1));
            integral += integrate_cell(a + (mid - a) * inner, a + (mid - a) * outer);
            integral += integrate_cell(b - (b - mid) * outer, b - (b - mid) * inner);
        }
        const double tip = std::ldexp(1.0, -grading_levels);
        integral += integrate_cell(a, a + (mid - a) * tip);
        integral += integrate_cell(b - (b - mid) * tip, b);
    }
    return std::pow(static_cast<double>(periods) * integral, 1.0 / p);
}

double l2_norm_coefficients(const TrigForcing& f, int periods) {
    if (periods < 1) throw std::invalid_argument("l2_norm_coefficients: periods must be >= 1");
    double sum = 0.0;
    for (double x : f.mean()) sum += x * x;
    for (const Harmonic& h : f.harmonics())
        for (int j = 0; j < f.dimension(); ++j)
            sum += 0.5 * (h.cos_coef[j] * h.cos_coef[j] + h.sin_coef[j] * h.sin_coef[j]);
    return std::sqrt(periods * f.period() * sum);
}

double dual_exponent(double r) {
    if (!(r > 1.0)) throw std::domain_error("dual_exponent: requires r > 1");
    return r / (r - 1.0);
}

TrigForcing combine(std::span<const CombineTerm> terms) {
    if (terms.empty()) throw std::invalid_argument("combine: no terms");
    for (const CombineTerm& term : terms)
        if (term.forcing == nullptr) throw std::invalid_argument("combine: null forcing");

    const TrigForcing& first = *terms.front().forcing;
    const int d = first.dimension();
    const double T = first.period();
    for (const CombineTerm& term : terms) {
        if (term.forcing->dimension() != d)
            throw std::invalid_argument("combine: dimension mismatch between terms");
        if (std::abs(term.forcing->period() - T) > 1e-12 * T)
            throw std::invalid_argument("combine: period mismatch between terms");
        if (term.matrix != nullptr &&
            (!term.matrix->square() || term.matrix->rows() != d))
            throw std::invalid_argument("combine: matrix shape incompatible with forcing dimension");
    }

    auto transformed = [&](const CombineTerm& term, const Vector& coef) {
        Vector out = term.matrix != nullptr ? term.matrix->apply(coef) : coef;
        for (double& x : out) x *= term.scale;
        return out;
    };

    Vector mean(d, 0.0);
    std::map<int, Harmonic> modes;
    for (const CombineTerm& term : terms) {
        const Vector m = transformed(term, term.forcing->mean());
        for (int j = 0; j < d; ++j) mean[j] += m[j];
        for (const Harmonic& h : term.forcing->harmonics()) {
            auto [it, inserted] = modes.try_emplace(h.index,
                                                    Harmonic{h.index, Vector(d, 0.0), Vector(d, 0.0)});
            const Vector c = transformed(term, h.cos_coef);
            const Vector s = transformed(term, h.sin_coef);
            for (int j = 0; j < d; ++j) {
                it->second.cos_coef[j] += c[j];
                it->second.sin_coef[j] += s[j];
            }
        }
    }

    std::vector<Harmonic> hs;
    for (auto& [index, h] : modes) {
        const bool zero = std::all_of(h.cos_coef.begin(), h.cos_coef.end(),
                                      [](double x) { return x == 0.0; }) &&
                          std::all_of(h.sin_coef.begin(), h.sin_coef.end(),
                                      [](double x) { return x == 0.0; });
        if (!zero) hs.push_back(std::move(h));
    }
    return TrigForcing(T, std::move(mean), std::move(hs));
}

}  // namespace orbitbound
