#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "kerrflux/config.hpp"
#include "kerrflux/model.hpp"
#include "kerrflux/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitSolverFailure = 2;

int cmd_run(const std::string& config_path, const std::string& out_path, int workers) {
    kerrflux::ParsedConfig parsed;
    try {
        parsed = kerrflux::parse_config_file(config_path);
    } catch (const kerrflux::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    }
    for (const std::string& note : parsed.notes) std::cerr << "note: " << note << "\n";
    for (const std::string& warn : kerrflux::validate_timescales(parsed.model)) {
        std::cerr << "warning: " << warn << "\n";
    }

    kerrflux::SweepResult result;
    try {
        result = kerrflux::run_sweep(parsed.model, parsed.sweep, workers);
    } catch (const kerrflux::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolverFailure;
    }

    if (out_path.empty()) {
        kerrflux::write_csv(result, std::cout);
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            std::cerr << "cannot open output file '" << out_path << "'\n";
            return kExitConfigError;
        }
        kerrflux::write_csv(result, file);
        if (!file.good()) {
            std::cerr << "write to '" << out_path << "' failed\n";
            return kExitSolverFailure;
        }
    }

    if (!result.all_solved()) {
        std::cerr << "solver failure at grid point(s):";
        for (std::size_t g : result.failed_grid_indices()) {
            std::cerr << " " << result.grid[g];
        }
        std::cerr << "\n";
        for (const auto& row : result.rows) {
            for (const auto& cell : row) {
                if (!cell.solved) {
                    std::cerr << "  " << cell.error << "\n";
                    return kExitSolverFailure;
                }
            }
        }
        return kExitSolverFailure;
    }
    return kExitOk;
}

int cmd_preset(const std::string& name, bool emit_config) {
    kerrflux::NetworkModel model;
    kerrflux::SweepSpec sweep;
    try {
        model = kerrflux::preset(name);
        sweep = kerrflux::preset_sweep(name);
    } catch (const kerrflux::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    }

    if (emit_config) {
        std::cout << serialize_config(model, sweep);
        return kExitOk;
    }

    std::cout << name << "\n";
    for (const auto& mode : model.modes) {
        std::cout << "  mode " << mode.label << ": kerr = " << mode.kerr_u
                  << ", gamma = " << mode.gamma << "\n";
    }
    for (const auto& coupling : model.couplings) {
        std::cout << "  coupling " << coupling.from_mode << " -> " << coupling.to_mode
                  << ": g = " << coupling.strength << ", phase = " << coupling.phase << "\n";
    }
    std::cout << "  drive " << model.drive.target_mode << ": epsilon = " << model.drive.epsilon
              << ", detuning = " << model.drive.detuning << "\n";
    std::cout << "  sweep " << kerrflux::to_string(sweep.variable) << " " << sweep.start
              << " .. " << sweep.stop << " (" << sweep.points << " points)\n";
    for (const std::string& warn : kerrflux::validate_timescales(model)) {
        std::cout << "  warning: " << warn << "\n";
    }
    return kExitOk;
}

int cmd_validate(const std::string& config_path) {
    try {
        const kerrflux::ParsedConfig parsed = kerrflux::parse_config_file(config_path);
        for (const std::string& note : parsed.notes) std::cout << "note: " << note << "\n";
        for (const std::string& warn : kerrflux::validate_timescales(parsed.model)) {
            std::cout << "warning: " << warn << "\n";
        }
        const auto dim =
            kerrflux::build_basis(static_cast<int>(parsed.model.modes.size()),
                                  parsed.model.truncation)
                .dimension();
        std::cout << "ok: " << parsed.model.modes.size() << " modes, "
                  << parsed.model.couplings.size() << " couplings, Hilbert dimension " << dim
                  << ", " << parsed.sweep.points << " grid points x "
                  << parsed.sweep.drive_ports.size() << " drive ports\n";
        return kExitOk;
    } catch (const kerrflux::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state transmission and photon statistics of driven "
                 "dissipative Kerr mode networks with synthetic flux"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    int workers = 1;
    auto* run = app.add_subcommand("run", "run the sweep described by a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--out", out_path, "output CSV path (stdout when omitted)");
    run->add_option("--workers", workers, "concurrent grid-point solvers")
        ->check(CLI::PositiveNumber);

    std::string preset_name;
    bool emit_config = false;
    auto* preset_cmd = app.add_subcommand("preset", "show or export a named scenario");
    preset_cmd->add_option("name", preset_name, "preset name")->required();
    preset_cmd->add_flag("--emit-config", emit_config, "print as a config document");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "check a config file");
    validate_cmd->add_option("config", validate_path, "config file")->required();

    auto* list_cmd = app.add_subcommand("list-presets", "list preset names");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, out_path, workers);
    if (preset_cmd->parsed()) return cmd_preset(preset_name, emit_config);
    if (validate_cmd->parsed()) return cmd_validate(validate_path);
    if (list_cmd->parsed()) {
        for (const std::string& name : kerrflux::preset_names()) std::cout << name << "\n";
        return kExitOk;
    }
    return kExitConfigError;
}
