#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "skt/core_types.hpp"
#include "skt/splitting.hpp"

namespace skt {

struct StepControllerConfig {
    double safety = 0.9;
    double tau_init = 1e-2;
    double tau_min = 1e-10;  // blow-up floor
    double tau_max = 1e-2;
    double final_time = 1.0;
    /// When set, every step uses this size (truncated at final_time) instead
    /// of the CFL-driven choice. The invertibility bound is still enforced.
    std::optional<double> fixed_tau;
    SchemeOptions scheme;

    void validate() const;
};

/// safety * delta^2 / (2 kappa max{1, max field}), capped at tau_max.
double max_stable_tau(const GridSpec& grid, const ModelParams& params, const FieldPair& fields,
                      const StepControllerConfig& cfg);

/// Per-step record passed to an optional step observer.
struct StepRecord {
    std::int64_t step_index;  // index after the step
    double time;              // time after the step
    double tau;
    double max_u;
    double max_v;
};

using SnapshotSink = std::function<void(std::int64_t step_index, double time, const FieldPair& fields)>;
using StepObserver = std::function<void(const StepRecord& record)>;

struct RunReport {
    std::int64_t accepted_steps = 0;
    std::int64_t cfl_violations = 0;   // post-hoc audit against the pre-step fields
    std::int64_t negative_steps = 0;   // steps that produced a negative entry
    double tau_sum = 0.0;
    double last_tau = 0.0;             // last accepted step
    double final_candidate_tau = 0.0;  // step proposed when the run stopped
    double max_field = 0.0;
    double dudt_estimate = 0.0;        // max |q_{k+1} - q_k| / tau over the last step
};

struct AdvanceResult {
    SolverState state;
    RunReport report;
};

/// Advances until final_time or until the admissible step drops below
/// tau_min (status BlowupDetected). Each step is step_full when
/// self-diffusion is present and step_cross_only otherwise.
///
/// In fixed-tau mode a step that breaks the invertibility bound throws
/// InvalidArgument before it is taken. SingularSystem from a step propagates.
AdvanceResult advance_to_time(SolverState state, const GridSpec& grid, const ModelParams& params,
                              const StepControllerConfig& cfg, const SnapshotSink& sink = {},
                              const StepObserver& observer = {});

}  // namespace skt
