// Command line front end: single runs, batches, parameter sweeps, and
// config validation for the sliding mode simulation library.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otsm/scenario.hpp"

namespace fs = std::filesystem;
using namespace otsm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitIo = 3;

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const auto comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos ? csv.size() - pos
                                                                           : comma - pos);
        try {
            values.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ValidationError("--values entry is not a number: '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return values;
}

void print_summary_row(const scenario::ScenarioSummary& row) {
    if (row.error) {
        std::cout << row.name << ": ERROR: " << *row.error << "\n";
        return;
    }
    std::cout << row.name << ": mode=" << row.mode << " settling="
              << (row.settling_time ? scenario::format_double(*row.settling_time) + " s" : "none")
              << " crossings=" << row.crossings
              << " residual=" << scenario::format_double(row.residual_amplitude) << "\n";
}

int summary_exit_code(const std::vector<scenario::ScenarioSummary>& summary) {
    int code = kExitOk;
    for (const auto& row : summary) {
        if (!row.error) continue;
        if (row.error->find("diverged") != std::string::npos)
            code = std::max(code, kExitDiverged);
        else
            code = std::max(code, kExitIo);
    }
    return code;
}

int cmd_simulate(const std::string& config, const std::string& out) {
    const auto sc = scenario::load_scenario(config);
    const auto summary = scenario::run_batch({sc}, out);
    print_summary_row(summary.front());
    return summary_exit_code(summary);
}

int cmd_batch(const std::string& config_dir, const std::string& out) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(config_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".cfg")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<scenario::Scenario> scenarios;
    scenarios.reserve(files.size());
    for (const auto& f : files) scenarios.push_back(scenario::load_scenario(f));

    const auto summary = scenario::run_batch(scenarios, out);
    for (const auto& row : summary) print_summary_row(row);
    return summary_exit_code(summary);
}

int cmd_sweep(const std::string& config, const std::string& param, const std::string& values,
              const std::string& out) {
    scenario::SweepSpec sweep;
    sweep.base = scenario::load_scenario(config);
    sweep.parameter = param;
    sweep.values = parse_values(values);

    const auto rows = scenario::run_sweep(sweep, out);
    std::cout << "value,mode,settling_time,crossings,residual\n";
    for (const auto& row : rows)
        std::cout << scenario::format_double(row.value) << "," << row.mode << ","
                  << (row.settling_time ? scenario::format_double(*row.settling_time) : "") << ","
                  << row.crossings << "," << scenario::format_double(row.residual_amplitude)
                  << "\n";
    return kExitOk;
}

int cmd_check(const std::string& config) {
    const auto sc = scenario::load_scenario(config);  // throws on any violation
    std::cout << "scenario '" << sc.name << "': valid\n";

    if (const auto* opt = std::get_if<control::OptimalSurface>(&sc.surface)) {
        const bool ok = control::existence_condition(opt->alpha);
        std::cout << "existence condition (alpha > 0.5): " << (ok ? "satisfied" : "VIOLATED")
                  << " (alpha = " << scenario::format_double(opt->alpha)
                  << (ok ? ", terminal mode" : ", twisting mode") << ")\n";
    } else {
        std::cout << "existence condition: n/a (not the optimal surface)\n";
    }

    // Amplitude vs U was already enforced by the parser; report the margin.
    const double amp = std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, dynamics::FrictionPerturbation>) return p.Fc;
            else if constexpr (std::is_same_v<T, dynamics::NoPerturbation>) return 0.0;
            else return p.A;
        },
        sc.perturbation);
    std::cout << "perturbation bound (|xi| < U): satisfied (amplitude "
              << scenario::format_double(amp) << " < U = "
              << scenario::format_double(sc.plant.U) << ")\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal terminal sliding mode control simulator"};
    app.require_subcommand(1);

    std::string config, out, config_dir, param, values;

    auto* sim = app.add_subcommand("simulate", "Run a single scenario");
    sim->add_option("--config", config, "Scenario config file")->required();
    sim->add_option("--out", out, "Output directory")->required();

    auto* batch = app.add_subcommand("batch", "Run every .cfg in a directory");
    batch->add_option("--config-dir", config_dir, "Directory of scenario configs")->required();
    batch->add_option("--out", out, "Output directory")->required();

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter of a base scenario");
    sweep->add_option("--config", config, "Base scenario config file")->required();
    sweep->add_option("--param", param, "Parameter path, e.g. surface.alpha")->required();
    sweep->add_option("--values", values, "Comma separated values")->required();
    sweep->add_option("--out", out, "Output directory")->required();

    auto* check = app.add_subcommand("check", "Validate a config without running it");
    check->add_option("--config", config, "Scenario config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config, out);
        if (batch->parsed()) return cmd_batch(config_dir, out);
        if (sweep->parsed()) return cmd_sweep(config, param, values, out);
        return cmd_check(config);
    } catch (const dynamics::SimulationDiverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
