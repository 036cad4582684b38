#include "orbitbound/criteria.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace orbitbound {

namespace {

/// M f'' - C f' + K f, the forcing combination whose dual norm multiplies the
/// displacement bound inside both criteria.
TrigForcing operator_combination(const SystemSpec& spec, const TrigForcing& f) {
    const TrigForcing df = f.derivative();
    const TrigForcing ddf = f.derivative(2);
    const CombineTerm terms[] = {{1.0, &spec.mass, &ddf},
                                 {-1.0, &spec.damping, &df},
                                 {1.0, &spec.stiffness, &f}};
    return combine(terms);
}

TrigForcing damped_combination(const SystemSpec& spec, const TrigForcing& f,
                               const EigenBounds& eb) {
    const TrigForcing df = f.derivative();
    const CombineTerm terms[] = {{1.0, nullptr, &f}, {-eb.m_max / eb.c_min, nullptr, &df}};
    return combine(terms);
}

bool is_zero_forcing(const TrigForcing& f) {
    if (!f.effectively_constant()) return false;
    for (double x : f.mean())
        if (x != 0.0) return false;
    return true;
}

CriterionResult zero_forcing_result(PotentialKind branch) {
    CriterionResult res;
    res.branch = branch;
    res.degenerate_constant = true;
    return res;
}

}  // namespace

CriterionResult hardening_criterion(const SystemSpec& spec, const TrigForcing& f) {
    if (spec.potential.kind != PotentialKind::Hardening)
        throw WrongBranchError("hardening_criterion: spec potential kind is " +
                               to_string(spec.potential.kind));
    if (is_zero_forcing(f)) return zero_forcing_result(PotentialKind::Hardening);

    const EigenBounds eb = eigen_bounds(spec);
    const double r = spec.potential.growth_exponent;
    const double rstar = dual_exponent(r);
    const double u0 = spec.potential.growth_coef;

    CriterionResult res;
    res.branch = PotentialKind::Hardening;
    res.degenerate_constant = f.effectively_constant();
    const double l2 = lp_norm(f, 2.0);
    res.lhs = l2 * l2;
    res.gradient_term = spec.potential.gradient_bound * lp_norm(f, 1.0);
    res.nonlinearity_term = std::pow(u0, -1.0 / (r - 1.0)) *
                            lp_norm(operator_combination(spec, f), rstar) *
                            std::pow(lp_norm(damped_combination(spec, f, eb), rstar),
                                     1.0 / (r - 1.0));
    res.rhs = res.gradient_term + res.nonlinearity_term;
    res.satisfied = res.lhs > res.rhs;
    return res;
}

CriterionResult softening_criterion(const SystemSpec& spec, const TrigForcing& f) {
    if (spec.potential.kind != PotentialKind::Softening)
        throw WrongBranchError("softening_criterion: spec potential kind is " +
                               to_string(spec.potential.kind));
    if (is_zero_forcing(f)) return zero_forcing_result(PotentialKind::Softening);

    const double rstar = dual_exponent(spec.potential.growth_exponent);

    CriterionResult res;
    res.branch = PotentialKind::Softening;
    res.degenerate_constant = f.effectively_constant();
    const double l2 = lp_norm(f, 2.0);
    res.lhs = l2 * l2;
    res.gradient_term = spec.potential.gradient_bound * lp_norm(f, 1.0);
    const double root = positive_root(softening_poly(spec, f));
    res.y_star = root;
    res.nonlinearity_term = lp_norm(operator_combination(spec, f), rstar) * root;
    res.rhs = res.gradient_term + res.nonlinearity_term;
    res.satisfied = res.lhs > res.rhs;
    return res;
}

CriterionResult evaluate_criterion(const SystemSpec& spec, const TrigForcing& f) {
    switch (spec.potential.kind) {
        case PotentialKind::Hardening: return hardening_criterion(spec, f);
        case PotentialKind::Softening: return softening_criterion(spec, f);
        case PotentialKind::None: break;
    }
    throw WrongBranchError("evaluate_criterion: spec has no potential envelope");
}

// ---------------------------------------------------------------------------
// Gap profile and critical amplitude
// ---------------------------------------------------------------------------

GapProfile::GapProfile(const SystemSpec& spec, const TrigForcing& unit_forcing)
    : branch_(spec.potential.kind) {
    if (branch_ == PotentialKind::None)
        throw WrongBranchError("GapProfile: spec has no potential envelope");
    if (is_zero_forcing(unit_forcing))
        throw std::invalid_argument("GapProfile: unit forcing is identically zero");

    const double r = spec.potential.growth_exponent;
    const double rstar = dual_exponent(r);
    const double l2 = lp_norm(unit_forcing, 2.0);
    lhs_unit_ = l2 * l2;
    gradient_unit_ = spec.potential.gradient_bound * lp_norm(unit_forcing, 1.0);
    combo_unit_ = lp_norm(operator_combination(spec, unit_forcing), rstar);

    if (branch_ == PotentialKind::Hardening) {
        const EigenBounds eb = eigen_bounds(spec);
        hardening_coef_ = std::pow(spec.potential.growth_coef, -1.0 / (r - 1.0)) * combo_unit_ *
                          std::pow(lp_norm(damped_combination(spec, unit_forcing, eb), rstar),
                                   1.0 / (r - 1.0));
        hardening_power_ = 1.0 + 1.0 / (r - 1.0);
    } else {
        unit_poly_ = softening_poly(spec, unit_forcing);
    }
}

double GapProfile::operator()(double amplitude) const {
    if (!(amplitude > 0.0)) throw std::invalid_argument("GapProfile: amplitude must be positive");
    const double quadratic = lhs_unit_ * amplitude * amplitude - gradient_unit_ * amplitude;
    if (branch_ == PotentialKind::Hardening)
        return quadratic - hardening_coef_ * std::pow(amplitude, hardening_power_);
    SofteningPoly scaled = unit_poly_;
    scaled.constant *= amplitude;
    return quadratic - combo_unit_ * amplitude * positive_root(scaled);
}

double gap_function(const SystemSpec& spec, const TrigForcing& unit_forcing, double amplitude) {
    if (!(amplitude > 0.0)) throw std::invalid_argument("gap_function: amplitude must be positive");
    const CriterionResult res = evaluate_criterion(spec, unit_forcing.scaled(amplitude));
    return res.lhs - res.rhs;
}

AmplitudeCurve critical_amplitude(const SystemSpec& spec, const TrigForcing& unit_forcing) {
    const GapProfile profile(spec, unit_forcing);
    constexpr double amplitude_cap = 1e9;

    AmplitudeCurve curve;
    auto record = [&](double a) {
        const double g = profile(a);
        curve.samples.emplace_back(a, g);
        return g;
    };

    // Bracket: the gap is negative for tiny amplitudes; double the upper end
    // until it turns positive.
    double lo = 1e-9;
    if (record(lo) > 0.0)
        throw NumericalError("critical_amplitude: gap not negative at vanishing amplitude");
    double hi = 1.0;
    double g_hi = record(hi);
    while (g_hi <= 0.0 && hi < amplitude_cap) {
        lo = hi;
        hi *= 2.0;
        g_hi = record(hi);
    }
    if (g_hi <= 0.0) {
        curve.status = "no_root";
        return curve;
    }

    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (profile(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double critical = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {  // secant polish inside the bracket
        const double ga = profile(lo), gb = profile(hi);
        if (gb == ga) break;
        const double next = lo - ga * (hi - lo) / (gb - ga);
        if (!(next > lo) || !(next < hi)) break;
        critical = next;
        if (profile(next) <= 0.0)
            lo = next;
        else
            hi = next;
    }

    const double residual = std::abs(profile(critical));
    if (residual > 1e-10 * std::max(1.0, critical * critical))
        throw NumericalError("critical_amplitude: root residual too large");
    if (!(profile(critical / (1.0 + 1e-6)) < 0.0) || !(profile(critical * (1.0 + 1e-6)) > 0.0))
        throw NumericalError("critical_amplitude: no sign change across the root");

    curve.critical = critical;
    curve.samples.emplace_back(critical, profile(critical));
    std::sort(curve.samples.begin(), curve.samples.end());

    if (profile.branch() == PotentialKind::Softening) {
        // The gap grows quadratically while the softening term grows with a
        // smaller power, so further roots are unexpected; scan defensively and
        // report any that exist.
        const double factor = std::pow(10.0, 1.0 / 64.0);
        double prev_a = critical * (1.0 + 1e-6);
        double prev_g = profile(prev_a);
        for (double a = prev_a * factor; a <= amplitude_cap; a *= factor) {
            const double g = profile(a);
            if ((g < 0.0) != (prev_g < 0.0)) {
                double ra = prev_a, rb = a;
                while (rb - ra > 1e-12 * rb) {
                    const double mid = 0.5 * (ra + rb);
                    if ((profile(mid) < 0.0) == (prev_g < 0.0))
                        ra = mid;
                    else
                        rb = mid;
                }
                curve.additional_roots.push_back(0.5 * (ra + rb));
            }
            prev_a = a;
            prev_g = g;
        }
    }
    return curve;
}

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

SweepParameter sweep_parameter_from_string(const std::string& name) {
    if (name == "c-scale") return SweepParameter::DampingScale;
    if (name == "k-scale") return SweepParameter::StiffnessScale;
    if (name == "u0") return SweepParameter::GrowthCoef;
    if (name == "U0") return SweepParameter::GradientBound;
    if (name == "omega") return SweepParameter::Omega;
    if (name == "n") return SweepParameter::HarmonicIndex;
    if (name == "delta") return SweepParameter::CubicCoef;
    throw std::invalid_argument("unknown sweep parameter: " + name);
}

std::string to_string(SweepParameter parameter) {
    switch (parameter) {
        case SweepParameter::DampingScale: return "c-scale";
        case SweepParameter::StiffnessScale: return "k-scale";
        case SweepParameter::GrowthCoef: return "u0";
        case SweepParameter::GradientBound: return "U0";
        case SweepParameter::Omega: return "omega";
        case SweepParameter::HarmonicIndex: return "n";
        case SweepParameter::CubicCoef: return "delta";
    }
    return "?";
}

namespace {

std::pair<SystemSpec, TrigForcing> apply_sweep_value(const SystemSpec& spec,
                                                     const TrigForcing& unit_forcing,
                                                     SweepParameter parameter, double value) {
    SystemSpec out = spec;
    switch (parameter) {
        case SweepParameter::DampingScale:
            out.damping = spec.damping.scaled(value);
            return {out, unit_forcing};
        case SweepParameter::StiffnessScale:
            out.stiffness = spec.stiffness.scaled(value);
            return {out, unit_forcing};
        case SweepParameter::GrowthCoef:
            out.potential.growth_coef = value;
            return {out, unit_forcing};
        case SweepParameter::GradientBound:
            out.potential.gradient_bound = value;
            return {out, unit_forcing};
        case SweepParameter::CubicCoef:
            out.potential.growth_coef = value;
            out.potential.gradient_bound = value;
            return {out, unit_forcing};
        case SweepParameter::Omega: {
            if (!(value > 0.0)) throw std::invalid_argument("omega must be positive");
            std::vector<Harmonic> hs(unit_forcing.harmonics().begin(),
                                     unit_forcing.harmonics().end());
            return {out, TrigForcing(2.0 * std::numbers::pi / value, unit_forcing.mean(), hs)};
        }
        case SweepParameter::HarmonicIndex: {
            const long long multiplier = std::llround(value);
            if (multiplier < 1 || std::abs(value - static_cast<double>(multiplier)) > 1e-9)
                throw std::invalid_argument("harmonic index factor must be a positive integer");
            std::vector<Harmonic> hs(unit_forcing.harmonics().begin(),
                                     unit_forcing.harmonics().end());
            for (Harmonic& h : hs) h.index *= static_cast<int>(multiplier);
            return {out, TrigForcing(unit_forcing.period(), unit_forcing.mean(), hs)};
        }
    }
    throw std::logic_error("apply_sweep_value: unhandled parameter");
}

SweepRow evaluate_sweep_point(const SystemSpec& spec, const TrigForcing& unit_forcing,
                              SweepParameter parameter, double value) {
    SweepRow row;
    row.value = value;
    try {
        const auto [point_spec, point_forcing] =
            apply_sweep_value(spec, unit_forcing, parameter, value);
        const ValidationResult check = validate(point_spec);
        if (!check.ok()) {
            const std::string& first =
                check.structural.empty() ? check.violations.front() : check.structural.front();
            row.status = "error: " + first;
            return row;
        }
        const AmplitudeCurve curve = critical_amplitude(point_spec, point_forcing);
        row.critical = curve.critical;
        row.status = curve.status;
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

}  // namespace

std::vector<SweepRow> sweep(const SystemSpec& spec, const TrigForcing& unit_forcing,
                            SweepParameter parameter, std::span<const double> grid, int workers) {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("sweep: grid must be strictly increasing");

    std::vector<SweepRow> rows(grid.size());
    if (grid.empty()) return rows;

    const int thread_count =
        std::clamp<int>(workers, 1, static_cast<int>(std::min<std::size_t>(grid.size(), 64)));
    if (thread_count == 1) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            rows[i] = evaluate_sweep_point(spec, unit_forcing, parameter, grid[i]);
        return rows;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1))
            rows[i] = evaluate_sweep_point(spec, unit_forcing, parameter, grid[i]);
    };
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    return rows;
}

}  // namespace orbitbound
