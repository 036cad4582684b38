#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "orbitbound/bounds.hpp"
#include "orbitbound/forcing.hpp"
#include "orbitbound/system_model.hpp"

namespace orbitbound {

/// Raised by the integrator when the state magnitude exceeds the divergence
/// threshold; carries the time at which it happened.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double escape_time)
        : std::runtime_error(what), escape_time_(escape_time) {}
    double escape_time() const { return escape_time_; }

private:
    double escape_time_;
};

/// A concrete potential gradient used to integrate the full nonlinear system,
/// as opposed to the envelope which only brackets it.
struct ConcretePotentialGradient {
    PotentialKind kind = PotentialKind::None;
    std::function<Vector(const Vector&)> gradient;

    static ConcretePotentialGradient none(int dimension);
    /// Componentwise +-coef * x^3: + for hardening, - for softening. Matches
    /// the envelope u0 = U0 = coef with growth exponent 4 on the unit ball.
    static ConcretePotentialGradient cubic(PotentialKind kind, double coef, int dimension);
};

/// Sampled consistency check of a concrete gradient against a declared
/// envelope on the ball of the given radius.
struct EnvelopeCheck {
    int samples = 0;
    int growth_violations = 0;
    int gradient_violations = 0;
    bool ok() const { return growth_violations == 0 && gradient_violations == 0; }
};

EnvelopeCheck check_envelope(const ConcretePotentialGradient& gradient,
                             const PotentialEnvelope& envelope, double radius,
                             int samples = 1000, std::uint64_t seed = 20240817);

struct IntegratorOptions {
    double step = 0.0;                  ///< 0 selects period / 2048.
    double divergence_threshold = 1e6;  ///< State magnitude treated as escape.
    int max_map_iterations = 500;       ///< Period-map relaxation cap.
    double map_tolerance = 1e-10;       ///< Fixed-point tolerance of the relaxation stage.
    double shooting_tolerance = 1e-11;  ///< Newton residual target on the period map.
    int max_newton_iterations = 30;
};

/// Fixed-step RK4 trajectory of the full system from state [x; v] at t_begin
/// to t_end. The step is adjusted so the span divides evenly. Raises
/// DivergenceError past the divergence threshold.
struct Trajectory {
    double start_time = 0.0;
    double step = 0.0;
    std::vector<Vector> states;  ///< Size 2d each; states.front() is the initial state.
};

Trajectory integrate(const SystemSpec& spec, const ConcretePotentialGradient& gradient,
                     const TrigForcing& f, const Vector& initial_state, double t_begin,
                     double t_end, double step);

/// A located periodic orbit sampled on a uniform grid over N periods,
/// including both endpoints.
struct OrbitSample {
    int periods = 1;
    double step = 0.0;
    std::vector<double> times;
    std::vector<Vector> positions;
    std::vector<Vector> velocities;
    double closure_residual = 0.0;   ///< |state(NT) - state(0)|
    double dynamics_residual = 0.0;  ///< max ODE defect via finite-difference acceleration
};

/// Residual tolerances every reported orbit must meet: closure within
/// 1e-8 (1 + max state magnitude) and dynamics defect within
/// 1e-6 (1 + sup |f|).
bool orbit_within_tolerances(const OrbitSample& orbit, const TrigForcing& f);

struct OrbitSearchResult {
    enum class Outcome { Converged, NoConvergence, Diverged };
    Outcome outcome = Outcome::NoConvergence;
    std::optional<OrbitSample> orbit;
    double escape_time = 0.0;    ///< Diverged only.
    int map_iterations = 0;
    double final_residual = 0.0; ///< Period-map residual |P(z) - z| reached.
};

/// Two-stage search for an N-period orbit: period-map relaxation from the
/// initial guess, then Newton shooting with finite-difference Jacobian.
/// Divergence and non-convergence are outcomes, not errors; a non-converged
/// search says nothing about non-existence.
OrbitSearchResult find_limit_cycle(const SystemSpec& spec,
                                   const ConcretePotentialGradient& gradient,
                                   const TrigForcing& f, int periods,
                                   const Vector& initial_state = {},
                                   const IntegratorOptions& options = {});

enum class OrbitComponent { Position, Velocity };

/// L^p norm of |x(t)| or |v(t)| over the orbit span by composite Simpson
/// quadrature; a grid-doubling estimate must agree to 1e-6 relative or
/// NumericalError is raised. p = infinity returns the refined grid maximum.
double orbit_lp_norm(const OrbitSample& orbit, double p, OrbitComponent component);

/// One a-priori bound compared against the measured orbit norm.
struct BoundCheck {
    std::string name;
    double bound = 0.0;
    double measured = 0.0;
    double slack = 0.0;  ///< bound - measured
    bool pass = false;   ///< slack >= -1e-9 * bound
};

/// Evaluates every applicable bound for the system against the located orbit.
/// Requires an orbit within the residual tolerances above.
std::vector<BoundCheck> check_bounds(const SystemSpec& spec, const TrigForcing& f,
                                     const OrbitSample& orbit);

}  // namespace orbitbound
