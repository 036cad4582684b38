#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "orbitbound/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
    std::string output_dir = ".";
    int workers = 0;
    bool quiet = false;
};

/// Writes via a temporary file and renames so a failed run never leaves a
/// partial report behind.
void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

fs::path prepare_output_dir(const GlobalOptions& global) {
    fs::path dir = global.output_dir.empty() ? fs::path(".") : fs::path(global.output_dir);
    fs::create_directories(dir);
    return dir;
}

std::string config_stem(const std::string& config_path) {
    return fs::path(config_path).stem().string();
}

/// Loads the config; on failure prints the field-path diagnostic and leaves
/// the optional empty (callers exit 1).
std::optional<orbitbound::RunConfig> load_or_report(const std::string& path) {
    try {
        return orbitbound::load_config(path);
    } catch (const orbitbound::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return std::nullopt;
}

/// Exit 1 on structural defects (schema-level), 2 on violated mathematical
/// preconditions, 0 when the system is admissible.
int gate_validation(const orbitbound::ValidationResult& validation) {
    for (const std::string& message : validation.structural)
        std::cerr << "config error: " << message << "\n";
    if (!validation.structural.empty()) return 1;
    for (const std::string& message : validation.violations)
        std::cerr << "precondition violated: " << message << "\n";
    if (!validation.violations.empty()) return 2;
    for (const std::string& message : validation.warnings)
        std::cerr << "warning: " << message << "\n";
    return 0;
}

int cmd_analyze(const GlobalOptions& global, const std::string& config_path) {
    const auto config = load_or_report(config_path);
    if (!config) return 1;
    if (const int code = gate_validation(orbitbound::validate(config->system)); code != 0)
        return code;

    orbitbound::AnalyzeResult result;
    try {
        result = orbitbound::run_analyze(*config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const fs::path dir = prepare_output_dir(global);
    const std::string stem = config_stem(config_path);
    const std::string summary = orbitbound::analyze_summary_text(*config, result);
    write_atomic(dir / (stem + "_report.json"), orbitbound::analyze_report_json(*config, result));
    write_atomic(dir / (stem + "_summary.txt"), summary);
    if (!global.quiet) std::cout << summary;

    if (result.criterion && result.criterion->degenerate_constant) {
        std::cerr << "precondition violated: criterion requires non-constant forcing\n";
        return 2;
    }
    return 0;
}

int cmd_sweep(const GlobalOptions& global, const std::string& config_path,
              const std::string& param, double from, double to, int points) {
    const auto config = load_or_report(config_path);
    if (!config) return 1;
    if (const int code = gate_validation(orbitbound::validate(config->system)); code != 0)
        return code;

    orbitbound::SweepParameter parameter;
    try {
        parameter = orbitbound::sweep_parameter_from_string(param);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (points < 2) {
        std::cerr << "error: --points must be at least 2\n";
        return 1;
    }
    if (!(to > from)) {
        std::cerr << "error: --to must exceed --from\n";
        return 1;
    }

    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = from + (to - from) * static_cast<double>(i) / (points - 1);

    int workers = global.workers;
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;

    std::vector<orbitbound::SweepRow> rows;
    try {
        rows = orbitbound::sweep(config->system, config->forcing, parameter, grid, workers);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const fs::path dir = prepare_output_dir(global);
    const fs::path csv_path = dir / (config_stem(config_path) + "_sweep_" + param + ".csv");
    write_atomic(csv_path, orbitbound::sweep_csv(parameter, rows));

    if (!global.quiet) {
        int resolved = 0;
        for (const orbitbound::SweepRow& row : rows) resolved += row.critical.has_value();
        std::cout << "sweep " << param << ": " << resolved << "/" << rows.size()
                  << " points with a critical amplitude -> " << csv_path.string() << "\n";
    }
    return 0;
}

int cmd_verify(const GlobalOptions& global, const std::string& config_path,
               std::optional<double> amplitude, std::optional<int> periods) {
    const auto config = load_or_report(config_path);
    if (!config) return 1;
    if (const int code = gate_validation(orbitbound::validate(config->system)); code != 0)
        return code;

    const double a = amplitude.value_or(config->analysis.amplitude);
    orbitbound::VerifyResult result;
    try {
        result = orbitbound::run_verify(*config, a, periods);
    } catch (const orbitbound::ConfigError& e) {
        std::cerr << "inconsistent request: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const fs::path dir = prepare_output_dir(global);
    const std::string stem = config_stem(config_path);
    write_atomic(dir / (stem + "_verify.json"), orbitbound::verify_report_json(*config, result));
    for (const orbitbound::VerifyRun& run : result.runs)
        if (run.search.orbit)
            write_atomic(dir / (stem + "_orbit_N" + std::to_string(run.periods) + ".csv"),
                         orbitbound::orbit_csv(*run.search.orbit));
    if (!global.quiet) std::cout << orbitbound::verify_summary_text(*config, result);

    return result.any_check_failed ? 3 : 0;
}

int cmd_rootbound(const std::vector<double>& values, std::vector<double> coeffs,
                  std::optional<double> exponent, bool as_json) {
    if (!values.empty()) {
        if (values.size() != 4 || !coeffs.empty() || exponent) {
            std::cerr << "error: pass either four positional values A B C s or "
                         "--coeffs A B C --exponent s\n";
            return 1;
        }
        coeffs = {values[0], values[1], values[2]};
        exponent = values[3];
    }
    if (coeffs.size() != 3 || !exponent) {
        std::cerr << "error: rootbound needs coefficients A B C and an exponent\n";
        return 1;
    }

    orbitbound::RootBoundValues bounds;
    try {
        bounds = orbitbound::compute_root_bounds(coeffs[0], coeffs[1], coeffs[2], *exponent);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cout << (as_json ? orbitbound::root_bounds_json(bounds)
                          : orbitbound::root_bounds_text(bounds));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Rigorous a-priori L^p bounds, non-existence criteria and critical forcing\n"
        "amplitudes for periodically forced, linearly damped mechanical systems."};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--output-dir", global.output_dir, "Directory for generated report files")
        ->envname("ORBITBOUND_OUTPUT_DIR");
    app.add_option("--workers", global.workers,
                   "Worker threads for sweeps (0 = hardware concurrency)");
    app.add_flag("--quiet", global.quiet, "Suppress stdout summaries");

    CLI::App* analyze = app.add_subcommand(
        "analyze", "Compute bounds, criteria and the critical amplitude for one config");
    analyze->fallthrough();
    std::string analyze_config;
    analyze->add_option("config", analyze_config, "System config file")->required();

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Trace the critical amplitude across a parameter grid");
    sweep->fallthrough();
    std::string sweep_config, sweep_param;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_points = 0;
    sweep->add_option("config", sweep_config, "System config file")->required();
    sweep->add_option("--param", sweep_param,
                      "Swept parameter: c-scale, k-scale, u0, U0, omega, n or delta")
        ->required();
    sweep->add_option("--from", sweep_from, "Grid start")->required();
    sweep->add_option("--to", sweep_to, "Grid end")->required();
    sweep->add_option("--points", sweep_points, "Grid size (>= 2)")->required();

    CLI::App* verify = app.add_subcommand(
        "verify", "Locate periodic orbits numerically and check every bound against them");
    verify->fallthrough();
    std::string verify_config;
    std::optional<double> verify_amplitude;
    std::optional<int> verify_periods;
    verify->add_option("config", verify_config, "System config file")->required();
    verify->add_option("--amplitude", verify_amplitude,
                       "Forcing amplitude (defaults to the config's analysis amplitude)");
    verify->add_option("--N", verify_periods, "Single period multiple instead of the 1,2,4 ladder")
        ->check(CLI::PositiveNumber);

    CLI::App* rootbound = app.add_subcommand(
        "rootbound", "Bounds for the positive root of A y^s - B y - C");
    rootbound->fallthrough();
    std::vector<double> root_values, root_coeffs;
    std::optional<double> root_exponent;
    bool root_json = false;
    rootbound->add_option("values", root_values, "Positional form: A B C s")->expected(0, 4);
    rootbound->add_option("--coeffs", root_coeffs, "Coefficients A B C")->expected(3);
    rootbound->add_option("--exponent", root_exponent, "Exponent s (>= 2)");
    rootbound->add_flag("--json", root_json, "Emit JSON instead of text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(global, analyze_config);
        if (app.got_subcommand(sweep))
            return cmd_sweep(global, sweep_config, sweep_param, sweep_from, sweep_to,
                             sweep_points);
        if (app.got_subcommand(verify))
            return cmd_verify(global, verify_config, verify_amplitude, verify_periods);
        if (app.got_subcommand(rootbound))
            return cmd_rootbound(root_values, root_coeffs, root_exponent, root_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
