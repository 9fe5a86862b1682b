#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skt/core_types.hpp"
#include "skt/splitting.hpp"
#include "skt/timestep_control.hpp"

namespace skt {

enum class ScenarioKind { Example1Dirichlet, Example1Neumann, Example2, Example3, Custom };

const char* to_string(ScenarioKind kind) noexcept;

enum class ForcingKind { Discrete, Continuous };
enum class CustomReaction { Zero, LotkaVolterra, Logistic };

/// Flat run description. parse_config fills scenario defaults first and then
/// applies the given keys, so every field is meaningful after parsing.
struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::Custom;

    // grid: N is the interior node count per side
    double L = 1.0;
    int N = 31;
    BoundaryKind bc = BoundaryKind::HomogeneousNeumann;

    double d1 = 1.0, d2 = 1.0, s1 = 0.0, s2 = 0.0, c12 = 0.0, c21 = 0.0;
    // reaction parameters; which ones are used depends on the scenario
    double a1 = 0.0, b1 = 0.0, c1 = 0.0, a2 = 0.0, b2 = 0.0, c2 = 0.0;
    double neumann_a = 1.0;
    ForcingKind forcing = ForcingKind::Discrete;
    CustomReaction reaction = CustomReaction::Zero;

    // controller
    double T = 1.0;
    double tau = 1e-4;  // step of the coarsest level when fixed_tau is set
    bool fixed_tau = false;
    double tau_init = 1e-2;
    double tau_min = 1e-10;
    double tau_max = 1e-2;
    double safety = 0.9;
    Predictor predictor = Predictor::FrozenSweep;

    int levels = 2;  // Example 1: runs at tau, tau/2, ...
    bool reference_scale = false;

    std::uint64_t rng_seed = 1;
    std::array<int, 3> freq_n{1, 2, 3}, freq_m{2, 1, 3}, freq_a{1, 3, 2}, freq_b{2, 2, 1};

    // Custom initial data: constant level plus seeded uniform noise in [0, perturbation)
    double u0 = 1.0, v0 = 1.0, perturbation = 0.0;

    int record_every = 1;
    std::vector<int> timing_sizes{32, 64, 128, 256};  // node counts per side
    int timing_steps = 1000;
    double timing_tau = 1e-6;

    std::filesystem::path output_dir = ".";

    GridSpec grid() const;
    ModelParams params() const;
    StepControllerConfig controller(double step) const;
    void validate() const;
};

/// Parses flat key=value text ('#' starts a comment, blank lines ignored).
/// `scenario` is required; the remaining keys override that scenario's
/// defaults. Overrides are further key=value strings applied after the text.
/// Throws InvalidArgument carrying the line number (or override) on syntax
/// errors, unknown keys and failed validation.
ScenarioConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});

/// Initial fields of the configured scenario on its grid.
FieldPair initial_fields(const ScenarioConfig& cfg);

struct ErrorRow {
    double tau;
    double delta;
    double max_err_u;
    double max_err_v;
};

struct ScenarioResult {
    RunStatus status = RunStatus::Running;
    double final_time = 0.0;
    double final_tau = 0.0;  // last step proposed by the controller
    double max_field = 0.0;
    double dudt = 0.0;
    std::int64_t steps = 0;           // summed over all runs of the scenario
    std::int64_t cfl_violations = 0;  // summed over all runs of the scenario
    std::int64_t negative_steps = 0;
    std::vector<ErrorRow> errors;  // Example 1
    std::vector<double> orders;    // Example 1, one per consecutive pair
    double spread_u = 0.0, spread_v = 0.0, mean_u = 0.0, mean_v = 0.0;  // final fields
    FieldPair final_fields;
    std::vector<std::filesystem::path> artifacts;
};

/// Runs the configured scenario and writes its CSV artifacts into
/// cfg.output_dir (created if missing):
///   Example 1: errors.csv, order.csv, snapshot.csv (finest run)
///   Example 2: homogeneity.csv, snapshot.csv
///   Example 3: blowup.csv, snapshot.csv
///   Custom:    trace.csv (blowup.csv columns), snapshot.csv
/// Solver errors propagate.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

struct TimingRow {
    int nodes;
    double seconds;
};

struct TimingResult {
    std::vector<TimingRow> rows;
    std::optional<double> slope;  // empty with fewer than two sizes
    std::vector<std::filesystem::path> artifacts;
};

/// Least-squares slope of log(seconds) against log(nodes). Throws
/// Indeterminate with fewer than two distinct sizes.
double fit_loglog_slope(const std::vector<TimingRow>& rows);

/// Wall time of timing_steps fixed steps of size timing_tau for each node
/// count in timing_sizes, with delta = L / (nodes - 1). Writes timing.csv.
TimingResult run_timing_study(const ScenarioConfig& cfg);

/// CSV "x,y,u,v", one row per node in x-fastest order, 17 significant digits.
void write_snapshot(const std::filesystem::path& path, const GridSpec& grid, const FieldPair& fields);

struct Snapshot {
    int side = 0;
    std::vector<double> x, y;
    FieldPair fields;
};

/// Reads a file written by write_snapshot. Throws Error on I/O or format problems.
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace skt
