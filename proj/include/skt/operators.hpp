#pragma once

#include <span>
#include <vector>

#include "skt/core_types.hpp"

namespace skt {

/// One-dimensional second difference T on a line of M nodes.
///
/// Interior rows are (1/h^2)[1, -2, 1]. Neumann end rows fold the ghost
/// reflection in: (1/h^2)[-2, 2] and (1/h^2)[2, -2], so constants lie in the
/// null space. Dirichlet end rows are zero: boundary values are pinned and
/// never change.
class LineOperator {
public:
    LineOperator(int size, double spacing, BoundaryKind bc);
    explicit LineOperator(const GridSpec& grid) : LineOperator(grid.node_count(), grid.spacing(), grid.bc()) {}

    int size() const noexcept { return size_; }
    double inv_h2() const noexcept { return inv_h2_; }
    BoundaryKind bc() const noexcept { return bc_; }

    /// out = T * line. Spans must both have size() entries.
    void apply(std::span<const double> line, std::span<double> out) const;

    /// Dense row-major M x M matrix of T, for oracles and tests.
    std::vector<double> dense() const;

private:
    int size_;
    double inv_h2_;
    BoundaryKind bc_;
};

std::vector<double> apply_line_operator(const LineOperator& op, std::span<const double> line);

/// P * field, with P = I (x) T differencing along x (the fast index).
Lattice apply_P(const GridSpec& grid, const Lattice& field);
/// P * D(diag) * field.
Lattice apply_P(const GridSpec& grid, const Lattice& field, const Lattice& diag);

/// R * field, with R = T (x) I differencing along y.
Lattice apply_R(const GridSpec& grid, const Lattice& field);
/// R * D(diag) * field.
Lattice apply_R(const GridSpec& grid, const Lattice& field, const Lattice& diag);

/// (P + R) * field.
Lattice apply_laplacian(const GridSpec& grid, const Lattice& field);

/// Largest step the invertibility bound admits: delta^2 / (2 kappa max{1, max field}).
/// Negative field entries count as zero.
double cfl_threshold(const GridSpec& grid, const ModelParams& params, const FieldPair& fields);

/// True iff kappa*tau/delta^2 < 1 / (2 max{1, max_j{u_j, v_j}}) holds strictly.
/// A false result means the step must shrink before the implicit factors are
/// guaranteed nonsingular.
bool invertibility_guard(const GridSpec& grid, const ModelParams& params, const FieldPair& fields, double tau);

}  // namespace skt
