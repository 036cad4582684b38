#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "orbitbound/forcing.hpp"
#include "orbitbound/system_model.hpp"

namespace orbitbound {

/// Raised for malformed or schema-violating configs; carries the offending
/// field path (e.g. "forcing.harmonics[0].n").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field_path, const std::string& message)
        : std::runtime_error(field_path.empty() ? message : field_path + ": " + message),
          field_path_(std::move(field_path)) {}

    const std::string& field_path() const { return field_path_; }

private:
    std::string field_path_;
};

/// Knobs for the analysis and verification pipelines.
struct AnalysisOptions {
    std::vector<int> periods = {1};  ///< Period multiples reported by analyze.
    double amplitude = 1.0;          ///< Default forcing scale for verify.
    double step = 0.0;               ///< Integrator step override; 0 = period/2048.
    int max_map_iterations = 500;
    Vector initial_state;            ///< Orbit search guess; empty = origin.
};

/// A full run description: the system, its T-periodic forcing, an optional
/// concrete cubic potential coefficient for verification runs, and pipeline
/// options.
struct RunConfig {
    SystemSpec system;
    TrigForcing forcing = TrigForcing::zero(1, 1.0);
    std::optional<double> cubic_coef;  ///< [potential] delta; +-delta x^3 family.
    AnalysisOptions analysis;
};

/// Parses the sectioned key = value config format (a TOML subset: [table],
/// [[table.array]], strings, numbers, nested arrays, # comments). Unknown
/// keys are schema errors.
RunConfig parse_config(std::string_view text);

/// Reads and parses a config file; I/O problems surface as ConfigError with
/// an empty field path.
RunConfig load_config(const std::string& path);

/// Canonical serialization; parse(serialize(parse(text))) is semantically
/// identical to parse(text).
std::string serialize_config(const RunConfig& config);

}  // namespace orbitbound
