#pragma once

#include <functional>

#include "skt/core_types.hpp"

namespace skt {

/// Exact solution u = v = sin(pi x) sin(pi y) exp(-2 pi^2 t) on [0,1]^2, zero on the boundary.
double exact_dirichlet(double x, double y, double t);

/// Forcing that makes exact_dirichlet solve the model with d = s = c = 1.
double forcing_dirichlet(double x, double y, double t);

/// Exact solution u = v = a + cos(pi x) cos(pi y) exp(-pi^2 t), zero normal derivative.
double exact_neumann(double a, double x, double y, double t);

/// Forcing that makes exact_neumann solve the model with d = s = c = 1.
/// At a = 1 the leading coefficient is the familiar 9 = 1 + 8a.
double forcing_neumann(double a, double x, double y, double t);

/// Grid-consistent variants: du/dt - (Laplacian_h)(u + 2 u^2) with the
/// five-point Laplacian of spacing h applied to the exact solution. The
/// semidiscrete system with this forcing has the sampled exact solution as an
/// exact solution, so the remaining error is purely temporal.
double discrete_forcing_dirichlet(double x, double y, double t, double h);
double discrete_forcing_neumann(double a, double x, double y, double t, double h);

using ExactSolution = std::function<double(double x, double y, double t)>;

/// Exact species values sampled on every node of the grid.
FieldPair sample_exact(const GridSpec& grid, const ExactSolution& exact, double t);

/// Pointwise |numeric - exact| for both species.
FieldPair abs_error_fields(const FieldPair& numeric, const ExactSolution& exact, const GridSpec& grid, double t);

/// Max over both species and all nodes of |numeric - exact|.
double max_abs_error(const FieldPair& numeric, const ExactSolution& exact, const GridSpec& grid, double t);

/// Errors below this floor are excluded from the order estimate.
inline constexpr double kOrderErrorFloor = 1e-14;

/// Temporal order from pointwise errors of runs at tau and tau/2:
///
///   p = (1/ln 2) * max over species of mean_{interior nodes} ln(|e_tau| / |e_tau/2|)
///
/// Nodes where either error is below kOrderErrorFloor are dropped and the
/// mean is taken over the nodes that remain. Throws Indeterminate when no
/// node is admissible for either species.
double estimate_order(const GridSpec& grid, const FieldPair& errors_coarse, const FieldPair& errors_fine);

}  // namespace skt
