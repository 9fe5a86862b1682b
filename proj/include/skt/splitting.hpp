#pragma once

#include "skt/core_types.hpp"

namespace skt {

/// How the time-level k+1 diagonals and endpoint reactions are predicted.
enum class Predictor {
    /// One forward Euler step of the semidiscrete system (euler_predict).
    ExplicitEuler,
    /// One splitting sweep with every diagonal and reaction frozen at t_k.
    /// First-order accurate like the Euler step, but it inherits the implicit
    /// sweeps' damping of grid-scale modes.
    FrozenSweep,
};

struct SchemeOptions {
    Predictor predictor = Predictor::FrozenSweep;
};

struct ReactionFields {
    Lattice f;
    Lattice g;
};

/// Pointwise reaction values at time t. Under Dirichlet boundaries the
/// boundary entries are zero (boundary nodes are pinned, not evolved).
ReactionFields evaluate_reactions(const FieldPair& fields, const GridSpec& grid, const ReactionSpec& spec, double t);

/// Forward Euler step of the semidiscrete system,
///   u* = u + tau (P + R)(d1 + s1 D(u) + c12 D(v)) u + tau f
/// and symmetrically for v. Supplies the time-level k+1 diagonals and the
/// endpoint reactions of the splitting steps.
FieldPair euler_predict(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau);

/// Prediction of (u_{k+1}, v_{k+1}) used by the splitting steps.
FieldPair predict_next(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                       const SchemeOptions& options = {});

/// Modified Douglas-Gunn step for cross-diffusion only (s1 = s2 = 0):
/// per species, an x-sweep and y-sweep for linear diffusion followed by an
/// x-sweep and y-sweep for cross-diffusion with predicted partner diagonals.
/// Throws InvalidArgument if self-diffusion is present.
FieldPair step_cross_only(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                         const SchemeOptions& options = {});

/// Modified Douglas-Gunn step with self- and cross-diffusion: linear,
/// self-diffusion (predicted own diagonal) and cross-diffusion (predicted
/// partner diagonal) factors, each as an x-sweep then a y-sweep.
FieldPair step_full(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                   const SchemeOptions& options = {});

/// step_full when self-diffusion is present, step_cross_only otherwise.
FieldPair scheme_step(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                     const SchemeOptions& options = {});

}  // namespace skt
