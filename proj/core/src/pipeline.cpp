#include "orbitbound/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace orbitbound {

namespace {

using Json = nlohmann::ordered_json;

std::string csv_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string sanitize_status(std::string status) {
    for (char& c : status)
        if (c == ',' || c == '\n') c = ';';
    return status;
}

Json to_json(const ValidationResult& v) {
    return Json{{"ok", v.ok()},
                {"structural", v.structural},
                {"violations", v.violations},
                {"warnings", v.warnings}};
}

Json to_json(const EigenBounds& eb) {
    return Json{{"m_min", eb.m_min}, {"m_max", eb.m_max}, {"c_min", eb.c_min},
                {"c_max", eb.c_max}, {"k_min", eb.k_min}, {"k_max", eb.k_max}};
}

Json to_json(const PotentialEnvelope& p) {
    Json j{{"kind", to_string(p.kind)}};
    if (p.kind != PotentialKind::None) {
        j["u0"] = p.growth_coef;
        j["r"] = p.growth_exponent;
        j["U0"] = p.gradient_bound;
    }
    return j;
}

Json to_json(const SofteningPoly& poly) {
    return Json{{"leading", poly.leading},
                {"linear", poly.linear},
                {"constant", poly.constant},
                {"exponent", poly.exponent}};
}

Json to_json(const HarmonicSolution& sol) {
    Json harmonics = Json::array();
    for (std::size_t k = 0; k < sol.indices.size(); ++k) {
        Json re = Json::array(), im = Json::array();
        double mag2 = 0.0;
        for (const Complex& c : sol.coefficients[k]) {
            re.push_back(c.real());
            im.push_back(c.imag());
            mag2 += std::norm(c);
        }
        harmonics.push_back(Json{{"n", sol.indices[k]},
                                 {"re", std::move(re)},
                                 {"im", std::move(im)},
                                 {"magnitude", std::sqrt(mag2)}});
    }
    return Json{{"harmonics", std::move(harmonics)},
                {"resonant", sol.resonant},
                {"near_singular", sol.near_singular}};
}

Json to_json(const BoundReport& report) {
    Json j{{"N", report.periods},
           {"branch", report.branch},
           {"constant_forcing", report.constant_forcing},
           {"velocity_l2", report.velocity_l2}};
    j["velocity_l2_improved"] =
        report.velocity_l2_improved ? Json(*report.velocity_l2_improved) : Json(nullptr);
    j["displacement_lr"] = report.displacement_lr ? Json(*report.displacement_lr) : Json(nullptr);
    j["position_linfty"] = report.position_linfty;
    j["initial_magnitude"] = report.initial_magnitude;
    j["softening_poly"] = report.poly ? to_json(*report.poly) : Json(nullptr);
    Json inter = Json::object();
    for (const LabeledValue& lv : report.intermediates) inter[lv.label] = lv.value;
    j["intermediates"] = std::move(inter);
    return j;
}

Json to_json(const CriterionResult& res) {
    Json j{{"branch", to_string(res.branch)},
           {"degenerate_constant", res.degenerate_constant},
           {"lhs", res.lhs},
           {"rhs", res.rhs},
           {"satisfied", res.satisfied},
           {"gradient_term", res.gradient_term},
           {"nonlinearity_term", res.nonlinearity_term}};
    j["y_star"] = res.y_star ? Json(*res.y_star) : Json(nullptr);
    return j;
}

Json to_json(const BoundCheck& check) {
    return Json{{"name", check.name},
                {"bound", check.bound},
                {"measured", check.measured},
                {"slack", check.slack},
                {"pass", check.pass}};
}

const char* outcome_name(OrbitSearchResult::Outcome outcome) {
    switch (outcome) {
        case OrbitSearchResult::Outcome::Converged: return "converged";
        case OrbitSearchResult::Outcome::NoConvergence: return "no_convergence";
        case OrbitSearchResult::Outcome::Diverged: return "diverged";
    }
    return "?";
}

}  // namespace

AnalyzeResult run_analyze(const RunConfig& config) {
    AnalyzeResult result;
    result.validation = validate(config.system);
    if (!result.validation.ok())
        throw std::invalid_argument("run_analyze: config fails validation");

    result.eigen = eigen_bounds(config.system);
    result.linear = solve_harmonics(config.system, config.forcing);
    if (!result.linear.has_resonance())
        result.linear_l2 = parseval_l2(result.linear, config.forcing.period());

    try {
        result.escape_amplitude = linear_escape_amplitude(config.system, config.forcing);
        result.escape_status = "ok";
    } catch (const ResonantSolutionError&) {
        result.escape_status = "resonant";
    } catch (const ZeroResponseError&) {
        result.escape_status = "zero_response";
    }

    for (int n : config.analysis.periods)
        result.bounds.push_back(make_bound_report(config.system, config.forcing, n));

    result.criteria_applicable = config.system.potential.kind != PotentialKind::None;
    if (result.criteria_applicable) {
        result.criterion = evaluate_criterion(config.system, config.forcing);
        try {
            result.amplitude_curve = critical_amplitude(config.system, config.forcing);
        } catch (const std::exception&) {
            // Degenerate shapes (e.g. zero forcing) have no amplitude profile.
        }
    }
    return result;
}

std::string analyze_report_json(const RunConfig& config, const AnalyzeResult& result) {
    Json j;
    j["schema"] = report_schema_version;

    j["system"] = Json{{"dimension", config.system.dimension},
                       {"domain_radius", config.system.domain_radius},
                       {"potential", to_json(config.system.potential)},
                       {"eigen_bounds", to_json(result.eigen)},
                       {"validation", to_json(result.validation)}};

    Json linear = to_json(result.linear);
    linear["l2_norm"] = result.linear_l2 ? Json(*result.linear_l2) : Json(nullptr);
    linear["escape_amplitude"] =
        result.escape_amplitude ? Json(*result.escape_amplitude) : Json(nullptr);
    linear["escape_status"] = result.escape_status;
    j["linear"] = std::move(linear);

    Json bounds = Json::array();
    for (const BoundReport& report : result.bounds) bounds.push_back(to_json(report));
    j["bounds"] = std::move(bounds);

    Json criteria;
    criteria["applicable"] = result.criteria_applicable;
    if (result.criterion) criteria["result"] = to_json(*result.criterion);
    if (result.amplitude_curve) {
        criteria["critical_amplitude"] = result.amplitude_curve->critical
                                             ? Json(*result.amplitude_curve->critical)
                                             : Json(nullptr);
        criteria["critical_status"] = result.amplitude_curve->status;
        criteria["additional_roots"] = result.amplitude_curve->additional_roots;
    } else if (result.criteria_applicable) {
        criteria["critical_amplitude"] = nullptr;
        criteria["critical_status"] = "unavailable";
    }
    j["criteria"] = std::move(criteria);
    return j.dump(2) + "\n";
}

std::string analyze_summary_text(const RunConfig& config, const AnalyzeResult& result) {
    std::ostringstream out;
    const SystemSpec& s = config.system;
    out << "system: dimension " << s.dimension << ", potential " << to_string(s.potential.kind)
        << ", domain radius " << s.domain_radius << "\n";
    out << "eigenvalues: m in [" << result.eigen.m_min << ", " << result.eigen.m_max << "], c in ["
        << result.eigen.c_min << ", " << result.eigen.c_max << "], k in [" << result.eigen.k_min
        << ", " << result.eigen.k_max << "]\n";
    out << "forcing: period " << config.forcing.period() << ", " << config.forcing.harmonics().size()
        << " harmonic(s)\n";
    if (result.linear.has_resonance()) {
        out << "linear response: resonant harmonics present (";
        for (std::size_t i = 0; i < result.linear.resonant.size(); ++i)
            out << (i ? ", " : "") << "n=" << result.linear.resonant[i];
        out << ")\n";
    } else if (result.linear_l2) {
        out << "linear response: L2 norm " << *result.linear_l2;
        if (result.escape_amplitude) out << ", escape amplitude " << *result.escape_amplitude;
        out << "\n";
    }
    for (const BoundReport& b : result.bounds) {
        out << "bounds (N=" << b.periods << "): velocity L2 <= " << b.velocity_l2;
        if (b.velocity_l2_improved) out << " (improved " << *b.velocity_l2_improved << ")";
        if (b.displacement_lr) out << ", displacement Lr <= " << *b.displacement_lr;
        out << ", sup|x| <= " << b.position_linfty << "\n";
    }
    if (result.criterion) {
        out << "criterion (" << to_string(result.criterion->branch)
            << "): lhs = " << result.criterion->lhs << ", rhs = " << result.criterion->rhs << " -> "
            << (result.criterion->satisfied ? "no periodic orbit inside the validity ball"
                                            : "not conclusive")
            << "\n";
        if (result.amplitude_curve) {
            if (result.amplitude_curve->critical)
                out << "critical amplitude: " << *result.amplitude_curve->critical << "\n";
            else
                out << "critical amplitude: " << result.amplitude_curve->status << "\n";
        }
    } else {
        out << "criterion: not applicable (no potential envelope)\n";
    }
    return out.str();
}

VerifyResult run_verify(const RunConfig& config, double amplitude,
                        std::optional<int> n_override) {
    if (!(amplitude > 0.0)) throw std::invalid_argument("run_verify: amplitude must be positive");
    const ValidationResult check = validate(config.system);
    if (!check.ok()) throw std::invalid_argument("run_verify: config fails validation");

    const PotentialKind kind = config.system.potential.kind;
    if (kind == PotentialKind::None && config.cubic_coef.has_value())
        throw ConfigError("potential.delta",
                          "inconsistent request: concrete potential given for kind \"none\"");

    VerifyResult result;
    result.amplitude = amplitude;
    const int d = config.system.dimension;
    ConcretePotentialGradient gradient = ConcretePotentialGradient::none(d);
    if (kind != PotentialKind::None) {
        result.cubic_coef = config.cubic_coef.value_or(config.system.potential.growth_coef);
        gradient = ConcretePotentialGradient::cubic(kind, result.cubic_coef, d);
    }

    const TrigForcing forcing = config.forcing.scaled(amplitude);
    IntegratorOptions options;
    options.step = config.analysis.step;
    options.max_map_iterations = config.analysis.max_map_iterations;

    std::vector<int> ladder = n_override ? std::vector<int>{*n_override} : std::vector<int>{1, 2, 4};
    for (int n : ladder) {
        VerifyRun run;
        run.periods = n;
        run.search = find_limit_cycle(config.system, gradient, forcing, n,
                                      config.analysis.initial_state, options);
        const bool converged = run.search.outcome == OrbitSearchResult::Outcome::Converged;
        if (converged) {
            const OrbitSample& orbit = *run.search.orbit;
            run.checks = check_bounds(config.system, forcing, orbit);
            run.max_position = orbit_lp_norm(orbit, infinite_p, OrbitComponent::Position);
            run.exits_domain = run.max_position > config.system.domain_radius;
            for (const BoundCheck& c : run.checks)
                if (!c.pass) result.any_check_failed = true;
        }
        result.runs.push_back(std::move(run));
        if (converged) break;
    }
    return result;
}

std::string verify_report_json(const RunConfig& config, const VerifyResult& result) {
    Json runs = Json::array();
    for (const VerifyRun& run : result.runs) {
        Json r{{"N", run.periods},
               {"outcome", outcome_name(run.search.outcome)},
               {"map_iterations", run.search.map_iterations},
               {"final_residual", run.search.final_residual}};
        if (run.search.outcome == OrbitSearchResult::Outcome::Diverged)
            r["escape_time"] = run.search.escape_time;
        if (run.search.orbit) {
            r["closure_residual"] = run.search.orbit->closure_residual;
            r["dynamics_residual"] = run.search.orbit->dynamics_residual;
            r["max_position"] = run.max_position;
            r["exits_domain"] = run.exits_domain;
            Json checks = Json::array();
            for (const BoundCheck& c : run.checks) checks.push_back(to_json(c));
            r["checks"] = std::move(checks);
        }
        runs.push_back(std::move(r));
    }
    Json j;
    j["schema"] = report_schema_version;
    j["verification"] = Json{{"amplitude", result.amplitude},
                             {"potential", to_string(config.system.potential.kind)},
                             {"cubic_coef", result.cubic_coef},
                             {"runs", std::move(runs)},
                             {"any_check_failed", result.any_check_failed}};
    return j.dump(2) + "\n";
}

std::string verify_summary_text(const RunConfig& config, const VerifyResult& result) {
    std::ostringstream out;
    out << "verify: potential " << to_string(config.system.potential.kind) << ", amplitude "
        << result.amplitude;
    if (config.system.potential.kind != PotentialKind::None)
        out << ", cubic coefficient " << result.cubic_coef;
    out << "\n";
    for (const VerifyRun& run : result.runs) {
        out << "N=" << run.periods << ": " << outcome_name(run.search.outcome);
        if (run.search.outcome == OrbitSearchResult::Outcome::Diverged)
            out << " (escape time " << run.search.escape_time << ")";
        if (run.search.orbit) {
            out << ", closure " << run.search.orbit->closure_residual << ", dynamics defect "
                << run.search.orbit->dynamics_residual << ", sup|x| " << run.max_position
                << (run.exits_domain ? " (exits validity ball)" : "");
        }
        out << "\n";
        for (const BoundCheck& c : run.checks)
            out << "  " << c.name << ": measured " << c.measured << " vs bound " << c.bound
                << " -> " << (c.pass ? "pass" : "FAIL") << "\n";
    }
    return out.str();
}

std::string orbit_csv(const OrbitSample& orbit) {
    const int d = orbit.positions.empty() ? 0 : static_cast<int>(orbit.positions.front().size());
    std::string out = "t";
    for (int j = 1; j <= d; ++j) out += ",x_" + std::to_string(j);
    for (int j = 1; j <= d; ++j) out += ",v_" + std::to_string(j);
    out += "\n";
    for (std::size_t i = 0; i < orbit.times.size(); ++i) {
        out += csv_number(orbit.times[i]);
        for (int j = 0; j < d; ++j) out += "," + csv_number(orbit.positions[i][j]);
        for (int j = 0; j < d; ++j) out += "," + csv_number(orbit.velocities[i][j]);
        out += "\n";
    }
    return out;
}

std::string sweep_csv(SweepParameter parameter, const std::vector<SweepRow>& rows) {
    std::string out = "param,value,A_star,status\n";
    const std::string name = to_string(parameter);
    for (const SweepRow& row : rows) {
        out += name + "," + csv_number(row.value) + ",";
        if (row.critical) out += csv_number(*row.critical);
        out += "," + sanitize_status(row.status) + "\n";
    }
    return out;
}

RootBoundValues compute_root_bounds(double leading, double linear, double constant,
                                    double exponent) {
    if (!(leading > 0.0) || !(linear > 0.0) || !(constant > 0.0))
        throw std::invalid_argument("compute_root_bounds: coefficients must be positive");
    if (!(exponent >= 2.0))
        throw std::invalid_argument("compute_root_bounds: exponent must be >= 2");
    RootBoundValues values;
    values.poly = SofteningPoly{leading, linear, constant, exponent};
    values.stationary = stationary_point(values.poly);
    values.root = positive_root(values.poly);
    values.parabolic = parabolic_root_bound(values.poly);
    values.lagrange = lagrange_root_bound(values.poly);
    return values;
}

std::string root_bounds_json(const RootBoundValues& values) {
    Json j;
    j["schema"] = report_schema_version;
    j["polynomial"] = to_json(values.poly);
    j["stationary_point"] = values.stationary;
    j["positive_root"] = values.root;
    j["parabolic_bound"] = values.parabolic;
    j["lagrange_bound"] = values.lagrange;
    return j.dump(2) + "\n";
}

std::string root_bounds_text(const RootBoundValues& values) {
    std::ostringstream out;
    out << "P(y) = " << values.poly.leading << " y^" << values.poly.exponent << " - "
        << values.poly.linear << " y - " << values.poly.constant << "\n";
    out << "stationary point : " << values.stationary << "\n";
    out << "positive root    : " << values.root << "\n";
    out << "parabolic bound  : " << values.parabolic << "\n";
    out << "lagrange bound   : " << values.lagrange << "\n";
    return out.str();
}

}  // namespace orbitbound
