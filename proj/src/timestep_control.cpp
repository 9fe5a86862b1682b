#include "skt/timestep_control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skt/operators.hpp"
#include "skt/splitting.hpp"

namespace skt {

namespace {
constexpr double kFinalTimeSlack = 1e-14;
}

void StepControllerConfig::validate() const {
    if (!(safety > 0.0 && safety <= 1.0)) throw InvalidArgument("safety must lie in (0, 1]");
    if (!(tau_min > 0.0)) throw InvalidArgument("tau_min must be > 0");
    if (!(tau_init >= tau_min)) throw InvalidArgument("tau_init must be >= tau_min");
    if (!(tau_max >= tau_init) || !std::isfinite(tau_max)) throw InvalidArgument("tau_max must be >= tau_init");
    if (!(final_time >= 0.0) || !std::isfinite(final_time)) throw InvalidArgument("final_time must be >= 0");
    if (fixed_tau && !(*fixed_tau > 0.0 && std::isfinite(*fixed_tau))) {
        throw InvalidArgument("fixed tau must be positive and finite");
    }
}

double max_stable_tau(const GridSpec& grid, const ModelParams& params, const FieldPair& fields,
                      const StepControllerConfig& cfg) {
    return std::min(cfg.tau_max, cfg.safety * cfl_threshold(grid, params, fields));
}

AdvanceResult advance_to_time(SolverState state, const GridSpec& grid, const ModelParams& params,
                              const StepControllerConfig& cfg, const SnapshotSink& sink,
                              const StepObserver& observer) {
    cfg.validate();
    params.validate();
    validate_fields(grid, state.fields);

    RunReport report;
    report.max_field = state.fields.max_value();
    state.status = RunStatus::Running;
    bool first = true;

    while (true) {
        const double remaining = cfg.final_time - state.time;
        if (remaining <= kFinalTimeSlack) {
            state.status = RunStatus::ReachedFinalTime;
            break;
        }

        double tau = 0.0;
        if (cfg.fixed_tau) {
            // the last step absorbs accumulated round-off in t instead of leaving a sliver
            tau = remaining < *cfg.fixed_tau * (1.0 + 1e-9) ? remaining : *cfg.fixed_tau;
            if (!invertibility_guard(grid, params, state.fields, tau)) {
                throw InvalidArgument("fixed step " + std::to_string(tau) + " at t=" + std::to_string(state.time) +
                                      " violates the invertibility bound (limit " +
                                      std::to_string(cfl_threshold(grid, params, state.fields)) + ")");
            }
        } else {
            double candidate = max_stable_tau(grid, params, state.fields, cfg);
            if (first) candidate = std::min(candidate, cfg.tau_init);
            report.final_candidate_tau = candidate;
            if (candidate < cfg.tau_min) {
                state.status = RunStatus::BlowupDetected;
                state.step = candidate;
                break;
            }
            tau = std::min(candidate, remaining);
        }
        first = false;

        if (!invertibility_guard(grid, params, state.fields, tau)) {
            ++report.cfl_violations;
        }

        FieldPair next = scheme_step(state, grid, params, tau, cfg.scheme);

        double change = 0.0;
        for (std::size_t k = 0; k < next.u.size(); ++k) {
            change = std::max({change, std::abs(next.u[k] - state.fields.u[k]), std::abs(next.v[k] - state.fields.v[k])});
        }
        report.dudt_estimate = change / tau;
        if (count_negative(next) > 0) ++report.negative_steps;

        state.fields = std::move(next);
        state.time += tau;
        state.step = tau;
        ++state.step_index;

        ++report.accepted_steps;
        report.tau_sum += tau;
        report.last_tau = tau;
        report.final_candidate_tau = tau;
        const double max_u = state.fields.u.max();
        const double max_v = state.fields.v.max();
        report.max_field = std::max(max_u, max_v);

        if (observer) observer(StepRecord{state.step_index, state.time, tau, max_u, max_v});
        if (sink) sink(state.step_index, state.time, state.fields);
        if (!std::isfinite(report.max_field)) {
            throw SingularSystem("advance_to_time: non-finite field values at t=" + std::to_string(state.time));
        }
    }
    return {std::move(state), report};
}

}  // namespace skt
