#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbitbound/bounds.hpp"

namespace orbitbound {

/// Outcome of a non-existence criterion. The criterion is satisfied (no
/// periodic solution can stay inside the validity ball, for any period
/// multiple) when lhs > rhs, where
///   lhs = ||f||^2_L2(0,T)
///   rhs = U0 ||f||_L1(0,T) + nonlinearity term of the active branch.
struct CriterionResult {
    PotentialKind branch = PotentialKind::None;
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double gradient_term = 0.0;         ///< U0 ||f||_L1(0,T)
    double nonlinearity_term = 0.0;
    std::optional<double> y_star;       ///< softening branch only
    bool degenerate_constant = false;   ///< flagged when the forcing is constant
};

CriterionResult hardening_criterion(const SystemSpec& spec, const TrigForcing& f);
CriterionResult softening_criterion(const SystemSpec& spec, const TrigForcing& f);
/// Dispatches on the system's potential kind; None raises WrongBranchError.
CriterionResult evaluate_criterion(const SystemSpec& spec, const TrigForcing& f);

/// Amplitude-scaling profile of the criterion gap for a fixed forcing shape:
/// F(A) = lhs(A f) - rhs(A f). Precomputes every unit-forcing norm so
/// evaluations cost O(1) (hardening) or one root solve (softening).
class GapProfile {
public:
    GapProfile(const SystemSpec& spec, const TrigForcing& unit_forcing);

    double operator()(double amplitude) const;
    PotentialKind branch() const { return branch_; }
    double lhs_unit() const { return lhs_unit_; }
    double gradient_unit() const { return gradient_unit_; }

private:
    PotentialKind branch_;
    double lhs_unit_ = 0.0;       // ||f_u||^2_L2
    double gradient_unit_ = 0.0;  // U0 ||f_u||_L1
    double hardening_coef_ = 0.0;
    double hardening_power_ = 0.0;
    double combo_unit_ = 0.0;     // ||M f'' - C f' + K f||_{r*} of the unit forcing
    SofteningPoly unit_poly_;     // softening branch; constant scales with A
};

/// Criterion gap at amplitude A for the given forcing shape, evaluated from
/// first principles (criterion on the scaled forcing). Agrees with GapProfile
/// to rounding; the pair gives an internal consistency check.
double gap_function(const SystemSpec& spec, const TrigForcing& unit_forcing, double amplitude);

/// Result of the critical-amplitude search. samples holds (A, F(A)) pairs at
/// strictly increasing amplitudes from the bracketing scan; status is "ok"
/// or "no_root" (no sign change up to the amplitude cap, reported rather
/// than raised). For the softening branch a log-spaced scan above the first
/// root records any further sign changes in additional_roots.
struct AmplitudeCurve {
    std::vector<std::pair<double, double>> samples;
    std::optional<double> critical;
    std::vector<double> additional_roots;
    std::string status = "ok";
};

AmplitudeCurve critical_amplitude(const SystemSpec& spec, const TrigForcing& unit_forcing);

/// Sweepable model parameters. DampingScale/StiffnessScale multiply C/K by
/// the grid value; GrowthCoef/GradientBound/Omega/HarmonicIndex replace u0,
/// U0, the fundamental frequency, or the harmonic indices; CubicCoef sets u0
/// and U0 jointly, matching a concrete +-delta x^3 potential family.
enum class SweepParameter {
    DampingScale,
    StiffnessScale,
    GrowthCoef,
    GradientBound,
    Omega,
    HarmonicIndex,
    CubicCoef,
};

/// Parses the CLI spelling: c-scale, k-scale, u0, U0, omega, n, delta.
SweepParameter sweep_parameter_from_string(const std::string& name);
std::string to_string(SweepParameter parameter);

struct SweepRow {
    double value = 0.0;
    std::optional<double> critical;
    std::string status;  ///< "ok", "no_root" or "error: ..."
};

/// Critical amplitude across a strictly increasing parameter grid. Per-point
/// failures are recorded inline in the row status; rows always come back in
/// grid order. workers > 1 distributes points across threads.
std::vector<SweepRow> sweep(const SystemSpec& spec, const TrigForcing& unit_forcing,
                            SweepParameter parameter, std::span<const double> grid,
                            int workers = 1);

}  // namespace orbitbound
