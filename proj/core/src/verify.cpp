#include "orbitbound/verify.hpp"

#include <cmath>
#include <random>

namespace orbitbound {

ConcretePotentialGradient ConcretePotentialGradient::none(int dimension) {
    ConcretePotentialGradient g;
    g.kind = PotentialKind::None;
    g.gradient = [dimension](const Vector&) { return Vector(dimension, 0.0); };
    return g;
}

ConcretePotentialGradient ConcretePotentialGradient::cubic(PotentialKind kind, double coef,
                                                           int dimension) {
    if (kind == PotentialKind::None)
        throw std::invalid_argument("ConcretePotentialGradient::cubic: kind must not be none");
    if (!(coef > 0.0))
        throw std::invalid_argument("ConcretePotentialGradient::cubic: coefficient must be positive");
    const double sign = kind == PotentialKind::Hardening ? 1.0 : -1.0;
    ConcretePotentialGradient g;
    g.kind = kind;
    g.gradient = [sign, coef, dimension](const Vector& x) {
        Vector out(dimension, 0.0);
        for (int j = 0; j < dimension; ++j) out[j] = sign * coef * x[j] * x[j] * x[j];
        return out;
    };
    return g;
}

EnvelopeCheck check_envelope(const ConcretePotentialGradient& gradient,
                             const PotentialEnvelope& envelope, double radius, int samples,
                             std::uint64_t seed) {
    if (gradient.kind != envelope.kind)
        throw std::invalid_argument("check_envelope: gradient and envelope kinds differ");
    if (!(radius > 0.0)) throw std::invalid_argument("check_envelope: radius must be positive");

    EnvelopeCheck result;
    result.samples = samples;
    if (envelope.kind == PotentialKind::None) return result;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Determine dimension from a probe call.
    const Vector probe = gradient.gradient(Vector{0.0});
    const int d = static_cast<int>(probe.size());

    for (int s = 0; s < samples; ++s) {
        Vector x(d);
        double norm2 = 0.0;
        for (int j = 0; j < d; ++j) {
            x[j] = gauss(rng);
            norm2 += x[j] * x[j];
        }
        const double scale =
            norm2 > 0.0 ? radius * std::pow(unit(rng), 1.0 / d) / std::sqrt(norm2) : 0.0;
        for (double& xi : x) xi *= scale;

        const Vector g = gradient.gradient(x);
        const double mag_x = euclidean_norm(std::span<const double>(x));
        const double mag_g = euclidean_norm(std::span<const double>(g));
        const double inner = dot(std::span<const double>(g), std::span<const double>(x));
        const double growth = envelope.growth_coef * std::pow(mag_x, envelope.growth_exponent);
        const double slack = 1e-12 * (1.0 + growth);

        if (envelope.kind == PotentialKind::Hardening) {
            if (inner < growth - slack) ++result.growth_violations;
        } else {
            if (inner > -growth + slack) ++result.growth_violations;
        }
        if (mag_g > envelope.gradient_bound + 1e-12 * (1.0 + envelope.gradient_bound))
            ++result.gradient_violations;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

namespace {

/// Right-hand side of the first-order system for state z = [x; v].
class SystemDynamics {
public:
    SystemDynamics(const SystemSpec& spec, const ConcretePotentialGradient& gradient,
                   const TrigForcing& f)
        : spec_(spec), gradient_(gradient), f_(f), mass_lu_(spec.mass), d_(spec.dimension) {
        if (mass_lu_.singular())
            throw std::invalid_argument("integrate: mass matrix is singular");
        if (f.dimension() != d_)
            throw std::invalid_argument("integrate: forcing dimension mismatch");
    }

    Vector operator()(double t, const Vector& z) const {
        Vector x(z.begin(), z.begin() + d_);
        Vector v(z.begin() + d_, z.end());
        Vector rhs = f_.evaluate(t);
        const Vector cv = spec_.damping.apply(v);
        const Vector kx = spec_.stiffness.apply(x);
        const Vector gu = gradient_.gradient(x);
        for (int j = 0; j < d_; ++j) rhs[j] -= cv[j] + kx[j] + gu[j];
        const Vector a = mass_lu_.solve(rhs);
        Vector dz(2 * d_);
        for (int j = 0; j < d_; ++j) {
            dz[j] = v[j];
            dz[d_ + j] = a[j];
        }
        return dz;
    }

    int dimension() const { return d_; }

private:
    const SystemSpec& spec_;
    const ConcretePotentialGradient& gradient_;
    const TrigForcing& f_;
    LuFactorization mass_lu_;
    int d_;
};

Vector rk4_step(const SystemDynamics& dyn, double t, const Vector& z, double h) {
    const Vector k1 = dyn(t, z);
    Vector zt(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) zt[i] = z[i] + 0.5 * h * k1[i];
    const Vector k2 = dyn(t + 0.5 * h, zt);
    for (std::size_t i = 0; i < z.size(); ++i) zt[i] = z[i] + 0.5 * h * k2[i];
    const Vector k3 = dyn(t + 0.5 * h, zt);
    for (std::size_t i = 0; i < z.size(); ++i) zt[i] = z[i] + h * k3[i];
    const Vector k4 = dyn(t + h, zt);
    Vector out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        out[i] = z[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

/// Integrates without storing intermediate states; throws DivergenceError.
Vector advance(const SystemDynamics& dyn, Vector z, double t_begin, double span, long steps,
               double threshold) {
    const double h = span / static_cast<double>(steps);
    for (long i = 0; i < steps; ++i) {
        z = rk4_step(dyn, t_begin + i * h, z, h);
        if (euclidean_norm(std::span<const double>(z)) > threshold)
            throw DivergenceError("integrate: state magnitude exceeded divergence threshold",
                                  t_begin + (i + 1) * h);
    }
    return z;
}

long step_count(double span, double step, double period) {
    const double nominal = step > 0.0 ? step : period / 2048.0;
    const long raw = std::max<long>(1, std::lround(span / nominal));
    return ((raw + 3) / 4) * 4;  // Simpson grid-doubling needs a multiple of 4
}

}  // namespace

Trajectory integrate(const SystemSpec& spec, const ConcretePotentialGradient& gradient,
                     const TrigForcing& f, const Vector& initial_state, double t_begin,
                     double t_end, double step) {
    if (!(t_end > t_begin)) throw std::invalid_argument("integrate: empty time span");
    const SystemDynamics dyn(spec, gradient, f);
    if (static_cast<int>(initial_state.size()) != 2 * dyn.dimension())
        throw std::invalid_argument("integrate: state size must be twice the dimension");

    const double span = t_end - t_begin;
    const long steps = step_count(span, step, f.period());
    const double h = span / static_cast<double>(steps);

    Trajectory traj;
    traj.start_time = t_begin;
    traj.step = h;
    traj.states.reserve(steps + 1);
    traj.states.push_back(initial_state);
    Vector z = initial_state;
    for (long i = 0; i < steps; ++i) {
        z = rk4_step(dyn, t_begin + i * h, z, h);
        if (euclidean_norm(std::span<const double>(z)) > 1e6)
            throw DivergenceError("integrate: state magnitude exceeded divergence threshold",
                                  t_begin + (i + 1) * h);
        traj.states.push_back(z);
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Limit-cycle search
// ---------------------------------------------------------------------------

namespace {

OrbitSample sample_orbit(const SystemSpec& spec, const ConcretePotentialGradient& gradient,
                         const TrigForcing& f, const Vector& z0, int periods, long steps_total,
                         double threshold) {
    const SystemDynamics dyn(spec, gradient, f);
    const double span = periods * f.period();
    const double h = span / static_cast<double>(steps_total);
    const int d = spec.dimension;

    OrbitSample orbit;
    orbit.periods = periods;
    orbit.step = h;
    orbit.times.reserve(steps_total + 1);
    orbit.positions.reserve(steps_total + 1);
    orbit.velocities.reserve(steps_total + 1);

    std::vector<Vector> states;
    states.reserve(steps_total + 1);
    states.push_back(z0);
    Vector z = z0;
    for (long i = 0; i < steps_total; ++i) {
        z = rk4_step(dyn, i * h, z, h);
        if (euclidean_norm(std::span<const double>(z)) > threshold)
            throw DivergenceError("sample_orbit: diverged", (i + 1) * h);
        states.push_back(z);
    }

    for (long i = 0; i <= steps_total; ++i) {
        orbit.times.push_back(i * h);
        orbit.positions.emplace_back(states[i].begin(), states[i].begin() + d);
        orbit.velocities.emplace_back(states[i].begin() + d, states[i].end());
    }

    Vector gap(2 * d);
    for (int j = 0; j < 2 * d; ++j) gap[j] = states.back()[j] - states.front()[j];
    orbit.closure_residual = euclidean_norm(std::span<const double>(gap));

    // ODE defect with a fourth-order central finite-difference acceleration;
    // the duplicate endpoint is dropped so indices wrap periodically.
    const long k = steps_total;
    double worst = 0.0;
    for (long i = 0; i < k; ++i) {
        const auto wrap = [&](long idx) { return static_cast<std::size_t>(((idx % k) + k) % k); };
        Vector accel(d, 0.0);
        for (int j = 0; j < d; ++j) {
            const double vm2 = orbit.velocities[wrap(i - 2)][j];
            const double vm1 = orbit.velocities[wrap(i - 1)][j];
            const double vp1 = orbit.velocities[wrap(i + 1)][j];
            const double vp2 = orbit.velocities[wrap(i + 2)][j];
            accel[j] = (-vp2 + 8.0 * vp1 - 8.0 * vm1 + vm2) / (12.0 * h);
        }
        const Vector ma = spec.mass.apply(accel);
        const Vector cv = spec.damping.apply(orbit.velocities[i]);
        const Vector kx = spec.stiffness.apply(orbit.positions[i]);
        const Vector gu = gradient.gradient(orbit.positions[i]);
        const Vector ft = f.evaluate(orbit.times[i]);
        double defect2 = 0.0;
        for (int j = 0; j < d; ++j) {
            const double rj = ma[j] + cv[j] + kx[j] + gu[j] - ft[j];
            defect2 += rj * rj;
        }
        worst = std::max(worst, std::sqrt(defect2));
    }
    orbit.dynamics_residual = worst;
    return orbit;
}

}  // namespace

bool orbit_within_tolerances(const OrbitSample& orbit, const TrigForcing& f) {
    double max_state = 0.0;
    for (std::size_t i = 0; i < orbit.positions.size(); ++i) {
        double s = 0.0;
        for (double x : orbit.positions[i]) s += x * x;
        for (double v : orbit.velocities[i]) s += v * v;
        max_state = std::max(max_state, std::sqrt(s));
    }
    const double f_sup = lp_norm(f, infinite_p);
    return orbit.closure_residual <= 1e-8 * (1.0 + max_state) &&
           orbit.dynamics_residual <= 1e-6 * (1.0 + f_sup);
}

OrbitSearchResult find_limit_cycle(const SystemSpec& spec,
                                   const ConcretePotentialGradient& gradient,
                                   const TrigForcing& f, int periods, const Vector& initial_state,
                                   const IntegratorOptions& options) {
    if (periods < 1) throw std::invalid_argument("find_limit_cycle: periods must be >= 1");
    const SystemDynamics dyn(spec, gradient, f);
    const int d = spec.dimension;

    Vector z(2 * d, 0.0);
    if (!initial_state.empty()) {
        if (static_cast<int>(initial_state.size()) != 2 * d)
            throw std::invalid_argument("find_limit_cycle: guess size must be twice the dimension");
        z = initial_state;
    }

    const double span = periods * f.period();
    const long steps_total = step_count(span, options.step, f.period());

    OrbitSearchResult result;
    auto period_map = [&](const Vector& state) {
        return advance(dyn, state, 0.0, span, steps_total, options.divergence_threshold);
    };

    try {
        // Stage 1: damped systems contract toward attracting orbits under
        // repeated application of the period map.
        double residual = std::numeric_limits<double>::infinity();
        for (int it = 0; it < options.max_map_iterations; ++it) {
            const Vector next = period_map(z);
            Vector diff(2 * d);
            for (int j = 0; j < 2 * d; ++j) diff[j] = next[j] - z[j];
            residual = euclidean_norm(std::span<const double>(diff));
            z = next;
            ++result.map_iterations;
            if (residual < options.map_tolerance) break;
        }

        // Stage 2: Newton shooting on G(z) = P(z) - z.
        auto defect = [&](const Vector& state) {
            Vector g = period_map(state);
            for (int j = 0; j < 2 * d; ++j) g[j] -= state[j];
            return g;
        };
        Vector g = defect(z);
        double gnorm = euclidean_norm(std::span<const double>(g));
        for (int it = 0; it < options.max_newton_iterations && gnorm >= options.shooting_tolerance;
             ++it) {
            Matrix jac(2 * d, 2 * d);
            for (int col = 0; col < 2 * d; ++col) {
                const double h = 1e-7 * (1.0 + std::abs(z[col]));
                Vector zp = z;
                zp[col] += h;
                const Vector gp = defect(zp);
                for (int row = 0; row < 2 * d; ++row) jac(row, col) = (gp[row] - g[row]) / h;
            }
            Vector rhs(2 * d);
            for (int j = 0; j < 2 * d; ++j) rhs[j] = -g[j];
            Vector delta;
            try {
                delta = lu_solve(jac, rhs);
            } catch (const NumericalError&) {
                break;  // singular shooting Jacobian: give up, keep best iterate
            }
            for (int j = 0; j < 2 * d; ++j) z[j] += delta[j];
            g = defect(z);
            gnorm = euclidean_norm(std::span<const double>(g));
        }
        result.final_residual = gnorm;
        if (gnorm >= options.shooting_tolerance) {
            result.outcome = OrbitSearchResult::Outcome::NoConvergence;
            return result;
        }

        result.orbit = sample_orbit(spec, gradient, f, z, periods, steps_total,
                                    options.divergence_threshold);
        result.outcome = OrbitSearchResult::Outcome::Converged;
        return result;
    } catch (const DivergenceError& e) {
        result.outcome = OrbitSearchResult::Outcome::Diverged;
        result.escape_time = e.escape_time();
        return result;
    }
}

// ---------------------------------------------------------------------------
// Orbit norms and bound checks
// ---------------------------------------------------------------------------

double orbit_lp_norm(const OrbitSample& orbit, double p, OrbitComponent component) {
    const std::vector<Vector>& series =
        component == OrbitComponent::Position ? orbit.positions : orbit.velocities;
    const std::size_t count = series.size();
    if (count < 5) throw std::invalid_argument("orbit_lp_norm: orbit too short");
    const std::size_t intervals = count - 1;

    std::vector<double> magnitude(count);
    for (std::size_t i = 0; i < count; ++i)
        magnitude[i] = euclidean_norm(std::span<const double>(series[i]));

    if (std::isinf(p) && p > 0.0) {
        // Grid maximum refined by a parabola through the bracketing samples.
        std::size_t best = 0;
        for (std::size_t i = 1; i < count; ++i)
            if (magnitude[i] > magnitude[best]) best = i;
        const std::size_t k = intervals;
        const double ym = magnitude[(best + k - 1) % k];
        const double y0 = magnitude[best % k];
        const double yp = magnitude[(best + 1) % k];
        const double denom = ym - 2.0 * y0 + yp;
        double refined = y0;
        if (denom < 0.0) {
            const double offset = 0.5 * (ym - yp) / denom;
            if (std::abs(offset) <= 1.0)
                refined = y0 - 0.25 * (ym - yp) * offset;
        }
        return std::max(y0, refined);
    }
    if (!(p >= 1.0)) throw std::domain_error("orbit_lp_norm: requires p >= 1");
    if (intervals % 4 != 0)
        throw std::invalid_argument("orbit_lp_norm: interval count must be divisible by 4");

    auto simpson = [&](std::size_t stride) {
        const double h = orbit.step * static_cast<double>(stride);
        double sum = 0.0;
        for (std::size_t i = 0; i + 2 * stride <= intervals; i += 2 * stride)
            sum += std::pow(magnitude[i], p) + 4.0 * std::pow(magnitude[i + stride], p) +
                   std::pow(magnitude[i + 2 * stride], p);
        return sum * h / 3.0;
    };

    const double fine = simpson(1);
    const double coarse = simpson(2);
    const double norm_fine = std::pow(fine, 1.0 / p);
    const double norm_coarse = std::pow(coarse, 1.0 / p);
    if (std::abs(norm_fine - norm_coarse) > 1e-6 * std::max({norm_fine, norm_coarse, 1e-300}))
        throw NumericalError("orbit_lp_norm: grid-doubling estimates disagree");
    // Richardson extrapolation of the two Simpson sums.
    return std::pow(fine + (fine - coarse) / 15.0, 1.0 / p);
}

std::vector<BoundCheck> check_bounds(const SystemSpec& spec, const TrigForcing& f,
                                     const OrbitSample& orbit) {
    if (!orbit_within_tolerances(orbit, f))
        throw std::invalid_argument("check_bounds: orbit residuals exceed tolerances");

    const int n = orbit.periods;
    std::vector<BoundCheck> checks;
    auto add = [&](std::string name, double bound, double measured) {
        BoundCheck c;
        c.name = std::move(name);
        c.bound = bound;
        c.measured = measured;
        c.slack = bound - measured;
        c.pass = c.slack >= -1e-9 * bound;
        checks.push_back(std::move(c));
    };

    const double velocity_l2 = orbit_lp_norm(orbit, 2.0, OrbitComponent::Velocity);
    add("velocity_l2", velocity_l2_bound(spec, f, n).value, velocity_l2);

    if (spec.potential.kind != PotentialKind::None) {
        if (!f.effectively_constant())
            add("velocity_l2_improved", improved_velocity_bound(spec, f, n), velocity_l2);
        const double r = spec.potential.growth_exponent;
        const double measured_lr = orbit_lp_norm(orbit, r, OrbitComponent::Position);
        if (spec.potential.kind == PotentialKind::Hardening)
            add("displacement_lr", hardening_lr_bound(spec, f, n), measured_lr);
        else
            add("displacement_lr", softening_lr_bound(spec, f, n), measured_lr);
    }

    const double x0 = euclidean_norm(std::span<const double>(orbit.positions.front()));
    add("position_linfty", linfty_orbit_bound(spec, f, n, x0),
        orbit_lp_norm(orbit, infinite_p, OrbitComponent::Position));
    return checks;
}

}  // namespace orbitbound
