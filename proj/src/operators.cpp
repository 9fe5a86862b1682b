#include "skt/operators.hpp"

#include <algorithm>
#include <cmath>

#include "skt/parallel.hpp"

namespace skt {

LineOperator::LineOperator(int size, double spacing, BoundaryKind bc)
    : size_(size), inv_h2_(1.0 / (spacing * spacing)), bc_(bc) {
    if (size < 2) {
        throw InvalidArgument("line operator: size must be at least 2");
    }
    if (!(spacing > 0.0)) {
        throw InvalidArgument("line operator: spacing must be positive");
    }
}

void LineOperator::apply(std::span<const double> line, std::span<double> out) const {
    const auto m = static_cast<std::size_t>(size_);
    if (line.size() != m || out.size() != m) {
        throw ShapeError("line operator: expected " + std::to_string(m) + " entries, got " +
                         std::to_string(line.size()));
    }
    for (std::size_t i = 1; i + 1 < m; ++i) {
        out[i] = inv_h2_ * (line[i - 1] - 2.0 * line[i] + line[i + 1]);
    }
    if (bc_ == BoundaryKind::HomogeneousNeumann) {
        out[0] = inv_h2_ * (-2.0 * line[0] + 2.0 * line[1]);
        out[m - 1] = inv_h2_ * (2.0 * line[m - 2] - 2.0 * line[m - 1]);
    } else {
        out[0] = 0.0;
        out[m - 1] = 0.0;
    }
}

std::vector<double> LineOperator::dense() const {
    const auto m = static_cast<std::size_t>(size_);
    std::vector<double> t(m * m, 0.0);
    for (std::size_t i = 1; i + 1 < m; ++i) {
        t[i * m + i - 1] = inv_h2_;
        t[i * m + i] = -2.0 * inv_h2_;
        t[i * m + i + 1] = inv_h2_;
    }
    if (bc_ == BoundaryKind::HomogeneousNeumann) {
        t[0] = -2.0 * inv_h2_;
        t[1] = 2.0 * inv_h2_;
        t[(m - 1) * m + m - 2] = 2.0 * inv_h2_;
        t[(m - 1) * m + m - 1] = -2.0 * inv_h2_;
    }
    return t;
}

std::vector<double> apply_line_operator(const LineOperator& op, std::span<const double> line) {
    std::vector<double> out(line.size());
    op.apply(line, out);
    return out;
}

namespace {

Lattice scaled(const Lattice& field, const Lattice& diag) {
    Lattice g(field.side());
    for (std::size_t k = 0; k < g.size(); ++k) {
        g[k] = diag[k] * field[k];
    }
    return g;
}

Lattice difference_x(const GridSpec& grid, const Lattice& g) {
    const LineOperator op(grid);
    Lattice out(g.side());
    parallel_for(static_cast<std::size_t>(g.side()), [&](std::size_t begin, std::size_t end) {
        for (auto j = static_cast<int>(begin); j < static_cast<int>(end); ++j) {
            op.apply(g.row(j), out.row(j));
        }
    });
    return out;
}

// Same arithmetic as LineOperator::apply, evaluated a whole row of columns at a time.
Lattice difference_y(const GridSpec& grid, const Lattice& g) {
    const int m = g.side();
    const double h = 1.0 / (grid.spacing() * grid.spacing());
    const bool neumann = grid.bc() == BoundaryKind::HomogeneousNeumann;
    Lattice out(m);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t begin, std::size_t end) {
        for (auto j = static_cast<int>(begin); j < static_cast<int>(end); ++j) {
            auto dst = out.row(j);
            if (j == 0 || j == m - 1) {
                if (!neumann) {
                    std::fill(dst.begin(), dst.end(), 0.0);
                    continue;
                }
                const auto edge = g.row(j);
                const auto next = g.row(j == 0 ? 1 : m - 2);
                for (int i = 0; i < m; ++i) {
                    dst[i] = j == 0 ? h * (-2.0 * edge[i] + 2.0 * next[i]) : h * (2.0 * next[i] - 2.0 * edge[i]);
                }
                continue;
            }
            const auto below = g.row(j - 1);
            const auto mid = g.row(j);
            const auto above = g.row(j + 1);
            for (int i = 0; i < m; ++i) {
                dst[i] = h * (below[i] - 2.0 * mid[i] + above[i]);
            }
        }
    });
    return out;
}

}  // namespace

Lattice apply_P(const GridSpec& grid, const Lattice& field) {
    require_shape(grid, field, "apply_P");
    return difference_x(grid, field);
}

Lattice apply_P(const GridSpec& grid, const Lattice& field, const Lattice& diag) {
    require_shape(grid, field, "apply_P");
    require_shape(grid, diag, "apply_P diag");
    return difference_x(grid, scaled(field, diag));
}

Lattice apply_R(const GridSpec& grid, const Lattice& field) {
    require_shape(grid, field, "apply_R");
    return difference_y(grid, field);
}

Lattice apply_R(const GridSpec& grid, const Lattice& field, const Lattice& diag) {
    require_shape(grid, field, "apply_R");
    require_shape(grid, diag, "apply_R diag");
    return difference_y(grid, scaled(field, diag));
}

Lattice apply_laplacian(const GridSpec& grid, const Lattice& field) {
    Lattice out = apply_P(grid, field);
    const Lattice r = apply_R(grid, field);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] += r[k];
    }
    return out;
}

double cfl_threshold(const GridSpec& grid, const ModelParams& params, const FieldPair& fields) {
    const double peak = std::max(1.0, fields.max_value());
    const double h2 = grid.spacing() * grid.spacing();
    return h2 / (2.0 * kappa(params) * peak);
}

bool invertibility_guard(const GridSpec& grid, const ModelParams& params, const FieldPair& fields, double tau) {
    const double peak = std::max(1.0, fields.max_value());
    const double h2 = grid.spacing() * grid.spacing();
    return kappa(params) * tau / h2 < 1.0 / (2.0 * peak);
}

}  // namespace skt
