#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "otsm/analysis.hpp"
#include "otsm/dynamics.hpp"

namespace otsm::scenario {

struct Scenario {
    std::string name;
    PlantParams plant;
    control::SurfaceSpec surface = control::OptimalSurface{};
    dynamics::PerturbationSpec perturbation = dynamics::NoPerturbation{};
    dynamics::SimConfig sim;
    analysis::AnalysisConfig analysis;

    bool operator==(const Scenario&) const = default;
};

void validate(const Scenario& scenario);

/// Thrown on malformed configuration text, with line/key context in what().
class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Parses the sectioned key-value configuration format (see README for the
/// key reference). Unknown keys are rejected; defaults are applied.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& file);

/// Normalized dump with every default resolved; parse(dump(s)) == s.
std::string dump_scenario(const Scenario& scenario);

/// Shortest round-trip decimal representation of an IEEE-754 double.
std::string format_double(double v);

struct RunResult {
    dynamics::Trajectory trajectory;
    analysis::ModeReport report;
};

RunResult run_scenario(const Scenario& scenario);

/// Header `t,x1,x2,s,u,xi`, one row per sample, written atomically
/// (write-then-rename).
void write_trajectory_csv(const dynamics::Trajectory& traj, const std::filesystem::path& file);

struct ScenarioSummary {
    std::string name;
    std::string mode;
    std::optional<double> settling_time;
    std::size_t crossings = 0;
    double residual_amplitude = 0.0;
    std::optional<std::string> error;  // per-scenario failure, batch continues
};

/// Writes <name>.trajectory.csv and <name>.report.json per scenario into
/// out_dir; duplicate names are rejected before execution. Summary rows
/// follow input order.
std::vector<ScenarioSummary> run_batch(const std::vector<Scenario>& scenarios,
                                       const std::filesystem::path& out_dir);

struct SweepSpec {
    Scenario base;
    std::string parameter;  // dotted path, e.g. surface.alpha
    std::vector<double> values;
};

/// Substitutes one value of the swept parameter; the result is revalidated.
Scenario substitute(const Scenario& base, const std::string& parameter, double value);

struct SweepRow {
    double value = 0.0;
    std::string mode;
    std::optional<double> settling_time;
    std::size_t crossings = 0;
    double residual_amplitude = 0.0;
};

/// Runs one scenario per value (artifacts as in run_batch, names suffixed
/// with the value) and writes `<base>.sweep.csv` with one row per value.
std::vector<SweepRow> run_sweep(const SweepSpec& sweep, const std::filesystem::path& out_dir);

}  // namespace otsm::scenario
