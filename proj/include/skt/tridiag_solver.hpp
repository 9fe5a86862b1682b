#pragma once

#include <limits>
#include <vector>

#include "skt/core_types.hpp"

namespace skt {

struct TridiagonalSystem {
    std::vector<double> lower;  // n-1 entries, lower[i] couples row i+1 to x[i]
    std::vector<double> diag;   // n entries
    std::vector<double> upper;  // n-1 entries, upper[i] couples row i to x[i+1]
    std::vector<double> rhs;    // n entries
};

/// Smallest |pivot| met during elimination, accumulated across calls.
struct SolveDiagnostics {
    double min_abs_pivot = std::numeric_limits<double>::infinity();
};

/// Thomas algorithm, O(n), no pivoting. Throws SingularSystem on a zero or
/// non-finite pivot and ShapeError on inconsistent lengths.
std::vector<double> thomas_solve(const TridiagonalSystem& sys, SolveDiagnostics* diagnostics = nullptr);

/// Solves (I - coef * P * D(diag_field)) w = rhs with one Thomas solve per x-line.
///
/// D multiplies on the right, so row i of the line system reads
///   -coef/h^2 * d[i-1],  1 + 2 coef/h^2 * d[i],  -coef/h^2 * d[i+1]
/// (the Neumann end rows carry the doubled neighbour coupling). Dirichlet end
/// rows are identity rows. The solve runs in correction form, w = rhs + y,
/// which makes w == rhs bitwise whenever P D rhs vanishes identically.
Lattice solve_shifted_x(const GridSpec& grid, double coef, const Lattice& diag_field, const Lattice& rhs,
                        SolveDiagnostics* diagnostics = nullptr);

/// As solve_shifted_x with R in place of P (sweeps along y).
Lattice solve_shifted_y(const GridSpec& grid, double coef, const Lattice& diag_field, const Lattice& rhs,
                        SolveDiagnostics* diagnostics = nullptr);

}  // namespace skt
