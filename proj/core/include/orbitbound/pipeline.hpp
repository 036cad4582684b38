#pragma once

#include "orbitbound/config.hpp"
#include "orbitbound/criteria.hpp"
#include "orbitbound/linear_analysis.hpp"
#include "orbitbound/verify.hpp"

namespace orbitbound {

inline constexpr int report_schema_version = 1;

/// Everything the analyze pipeline computes for one config.
struct AnalyzeResult {
    ValidationResult validation;
    EigenBounds eigen;
    HarmonicSolution linear;
    std::optional<double> linear_l2;            ///< Absent under resonance.
    std::optional<double> escape_amplitude;
    std::string escape_status;                  ///< "ok", "resonant" or "zero_response"
    std::vector<BoundReport> bounds;            ///< One per requested period multiple.
    bool criteria_applicable = false;
    std::optional<CriterionResult> criterion;
    std::optional<AmplitudeCurve> amplitude_curve;
};

/// Runs validation, linear analysis, bounds and criteria. Requires a config
/// whose validation passes; callers should validate first and handle
/// violations themselves.
AnalyzeResult run_analyze(const RunConfig& config);

std::string analyze_report_json(const RunConfig& config, const AnalyzeResult& result);
std::string analyze_summary_text(const RunConfig& config, const AnalyzeResult& result);

/// One orbit search at a fixed period multiple plus its bound checks.
struct VerifyRun {
    int periods = 1;
    OrbitSearchResult search;
    std::vector<BoundCheck> checks;     ///< Converged runs only.
    double max_position = 0.0;          ///< Sup |x(t)| along the orbit.
    bool exits_domain = false;          ///< max_position > domain_radius.
};

struct VerifyResult {
    double amplitude = 1.0;
    double cubic_coef = 0.0;            ///< 0 for a linear verification run.
    std::vector<VerifyRun> runs;
    bool any_check_failed = false;
};

/// Locates periodic orbits of the concrete system and checks every
/// applicable bound. n_override runs a single period multiple; otherwise the
/// ladder 1, 2, 4 is tried and the search stops at the first converged
/// orbit. Raises ConfigError("potential.delta", ...) when the request is
/// inconsistent (delta given for kind none).
VerifyResult run_verify(const RunConfig& config, double amplitude,
                        std::optional<int> n_override);

std::string verify_report_json(const RunConfig& config, const VerifyResult& result);
std::string verify_summary_text(const RunConfig& config, const VerifyResult& result);

/// CSV with header t,x_1..x_d,v_1..v_d.
std::string orbit_csv(const OrbitSample& orbit);

/// CSV with header param,value,A_star,status.
std::string sweep_csv(SweepParameter parameter, const std::vector<SweepRow>& rows);

/// Root-bound computations exposed by the rootbound command.
struct RootBoundValues {
    SofteningPoly poly;
    double stationary = 0.0;
    double root = 0.0;
    double parabolic = 0.0;
    double lagrange = 0.0;
};

RootBoundValues compute_root_bounds(double leading, double linear, double constant,
                                    double exponent);
std::string root_bounds_json(const RootBoundValues& values);
std::string root_bounds_text(const RootBoundValues& values);

}  // namespace orbitbound
