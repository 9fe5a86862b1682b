#include "skt/tridiag_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skt/operators.hpp"
#include "skt/parallel.hpp"

namespace skt {

namespace {

double checked_pivot(double pivot, std::size_t row, double& min_abs) {
    if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot)) {
        throw SingularSystem("tridiagonal solve: zero or non-finite pivot at row " + std::to_string(row));
    }
    min_abs = std::min(min_abs, std::abs(pivot));
    return pivot;
}

// Forward elimination and back substitution; cp and dp are scratch of length n.
void thomas_kernel(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                   std::span<const double> rhs, std::span<double> cp, std::span<double> dp, std::span<double> x,
                   double& min_abs) {
    const std::size_t n = diag.size();
    double m = checked_pivot(diag[0], 0, min_abs);
    cp[0] = n > 1 ? upper[0] / m : 0.0;
    dp[0] = rhs[0] / m;
    for (std::size_t i = 1; i < n; ++i) {
        m = checked_pivot(diag[i] - lower[i - 1] * cp[i - 1], i, min_abs);
        cp[i] = i + 1 < n ? upper[i] / m : 0.0;
        dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / m;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
}

void check_coef(double coef) {
    if (!std::isfinite(coef)) {
        throw InvalidArgument("shifted solve: coefficient must be finite");
    }
}

}  // namespace

std::vector<double> thomas_solve(const TridiagonalSystem& sys, SolveDiagnostics* diagnostics) {
    const std::size_t n = sys.diag.size();
    if (n == 0 || sys.rhs.size() != n || sys.lower.size() + 1 != n || sys.upper.size() + 1 != n) {
        throw ShapeError("thomas_solve: inconsistent lengths (need lower/upper n-1, diag/rhs n)");
    }
    std::vector<double> cp(n), dp(n), x(n);
    double min_abs = std::numeric_limits<double>::infinity();
    thomas_kernel(sys.lower, sys.diag, sys.upper, sys.rhs, cp, dp, x, min_abs);
    if (diagnostics) diagnostics->min_abs_pivot = std::min(diagnostics->min_abs_pivot, min_abs);
    return x;
}

Lattice solve_shifted_x(const GridSpec& grid, double coef, const Lattice& diag_field, const Lattice& rhs,
                        SolveDiagnostics* diagnostics) {
    require_shape(grid, diag_field, "solve_shifted_x diag");
    require_shape(grid, rhs, "solve_shifted_x rhs");
    check_coef(coef);
    const int m = grid.node_count();
    const auto n = static_cast<std::size_t>(m);
    const double a = coef / (grid.spacing() * grid.spacing());
    const bool neumann = grid.bc() == BoundaryKind::HomogeneousNeumann;

    // Correction right-hand side coef * P D rhs.
    Lattice correction = apply_P(grid, rhs, diag_field);
    Lattice out(m);
    std::vector<double> pivots(n, std::numeric_limits<double>::infinity());

    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        std::vector<double> lower(n - 1), diag(n), upper(n - 1), r(n), cp(n), dp(n), y(n);
        for (std::size_t j = begin; j < end; ++j) {
            const auto d = diag_field.row(static_cast<int>(j));
            const auto b = rhs.row(static_cast<int>(j));
            const auto c = correction.row(static_cast<int>(j));
            for (std::size_t i = 0; i < n; ++i) {
                diag[i] = 1.0 + 2.0 * a * d[i];
                r[i] = coef * c[i];
            }
            for (std::size_t i = 0; i + 1 < n; ++i) {
                lower[i] = -a * d[i];
                upper[i] = -a * d[i + 1];
            }
            if (neumann) {
                upper[0] = -2.0 * a * d[1];
                lower[n - 2] = -2.0 * a * d[n - 2];
            } else {
                diag[0] = 1.0;
                upper[0] = 0.0;
                diag[n - 1] = 1.0;
                lower[n - 2] = 0.0;
            }
            thomas_kernel(lower, diag, upper, r, cp, dp, y, pivots[j]);
            auto w = out.row(static_cast<int>(j));
            for (std::size_t i = 0; i < n; ++i) {
                w[i] = b[i] + y[i];
            }
        }
    });
    if (diagnostics) {
        diagnostics->min_abs_pivot =
            std::min(diagnostics->min_abs_pivot, *std::min_element(pivots.begin(), pivots.end()));
    }
    return out;
}

// Batched Thomas along y: row j of the lattice holds the j-th unknown of every
// column line, so each elimination step is a contiguous sweep over x.
Lattice solve_shifted_y(const GridSpec& grid, double coef, const Lattice& diag_field, const Lattice& rhs,
                        SolveDiagnostics* diagnostics) {
    require_shape(grid, diag_field, "solve_shifted_y diag");
    require_shape(grid, rhs, "solve_shifted_y rhs");
    check_coef(coef);
    const int m = grid.node_count();
    const auto n = static_cast<std::size_t>(m);
    const double a = coef / (grid.spacing() * grid.spacing());
    const bool neumann = grid.bc() == BoundaryKind::HomogeneousNeumann;

    Lattice correction = apply_R(grid, rhs, diag_field);
    Lattice cp(m), dp(m), out(m);
    std::vector<double> pivots(n, std::numeric_limits<double>::infinity());

    // Coefficients of line row j: lower couples to j-1, upper to j+1.
    auto lower_at = [&](int j, int i) {
        if (!neumann && j == m - 1) return 0.0;
        return neumann && j == m - 1 ? -2.0 * a * diag_field(i, j - 1) : -a * diag_field(i, j - 1);
    };
    auto upper_at = [&](int j, int i) {
        if (!neumann && j == 0) return 0.0;
        return neumann && j == 0 ? -2.0 * a * diag_field(i, j + 1) : -a * diag_field(i, j + 1);
    };
    auto diag_at = [&](int j, int i) {
        if (!neumann && (j == 0 || j == m - 1)) return 1.0;
        return 1.0 + 2.0 * a * diag_field(i, j);
    };

    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        const int i0 = static_cast<int>(begin);
        const int i1 = static_cast<int>(end);
        for (int i = i0; i < i1; ++i) {
            const double p = checked_pivot(diag_at(0, i), 0, pivots[i]);
            cp(i, 0) = m > 1 ? upper_at(0, i) / p : 0.0;
            dp(i, 0) = coef * correction(i, 0) / p;
        }
        for (int j = 1; j < m; ++j) {
            for (int i = i0; i < i1; ++i) {
                const double low = lower_at(j, i);
                const double p = checked_pivot(diag_at(j, i) - low * cp(i, j - 1), static_cast<std::size_t>(j), pivots[i]);
                cp(i, j) = j + 1 < m ? upper_at(j, i) / p : 0.0;
                dp(i, j) = (coef * correction(i, j) - low * dp(i, j - 1)) / p;
            }
        }
        for (int i = i0; i < i1; ++i) {
            out(i, m - 1) = dp(i, m - 1);
        }
        for (int j = m - 1; j-- > 0;) {
            for (int i = i0; i < i1; ++i) {
                out(i, j) = dp(i, j) - cp(i, j) * out(i, j + 1);
            }
        }
        for (int j = 0; j < m; ++j) {
            for (int i = i0; i < i1; ++i) {
                out(i, j) = rhs(i, j) + out(i, j);
            }
        }
    });
    if (diagnostics) {
        diagnostics->min_abs_pivot =
            std::min(diagnostics->min_abs_pivot, *std::min_element(pivots.begin(), pivots.end()));
    }
    return out;
}

}  // namespace skt
