#include "skt/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace skt {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
}  // namespace

double exact_dirichlet(double x, double y, double t) {
    return std::sin(kPi * x) * std::sin(kPi * y) * std::exp(-2.0 * kPi2 * t);
}

double forcing_dirichlet(double x, double y, double t) {
    const double sx = std::sin(kPi * x), sy = std::sin(kPi * y);
    const double cx = std::cos(kPi * x), cy = std::cos(kPi * y);
    return -4.0 * kPi2 * std::exp(-4.0 * kPi2 * t) *
           (cy * cy * sx * sx + cx * cx * sy * sy - 2.0 * sy * sy * sx * sx);
}

double exact_neumann(double a, double x, double y, double t) {
    return a + std::cos(kPi * x) * std::cos(kPi * y) * std::exp(-kPi2 * t);
}

double forcing_neumann(double a, double x, double y, double t) {
    const double sx = std::sin(kPi * x), sy = std::sin(kPi * y);
    const double cx = std::cos(kPi * x), cy = std::cos(kPi * y);
    return std::exp(-2.0 * kPi2 * t) * kPi2 *
           ((1.0 + 8.0 * a) * std::exp(kPi2 * t) * cx * cy + 8.0 * cx * cx * cy * cy - 4.0 * cy * cy * sx * sx -
            4.0 * cx * cx * sy * sy);
}

namespace {

// Flux potential d u + s u^2 + c u v at u = v and d = s = c = 1.
double potential(double w) { return w + 2.0 * w * w; }

template <class Exact>
double discrete_laplacian_of_potential(const Exact& exact, double x, double y, double h) {
    const double centre = potential(exact(x, y));
    return (potential(exact(x - h, y)) + potential(exact(x + h, y)) + potential(exact(x, y - h)) +
            potential(exact(x, y + h)) - 4.0 * centre) /
           (h * h);
}

}  // namespace

double discrete_forcing_dirichlet(double x, double y, double t, double h) {
    auto exact = [t](double px, double py) { return exact_dirichlet(px, py, t); };
    return -2.0 * kPi2 * exact_dirichlet(x, y, t) - discrete_laplacian_of_potential(exact, x, y, h);
}

double discrete_forcing_neumann(double a, double x, double y, double t, double h) {
    auto exact = [a, t](double px, double py) { return exact_neumann(a, px, py, t); };
    const double dudt = -kPi2 * std::cos(kPi * x) * std::cos(kPi * y) * std::exp(-kPi2 * t);
    return dudt - discrete_laplacian_of_potential(exact, x, y, h);
}

FieldPair sample_exact(const GridSpec& grid, const ExactSolution& exact, double t) {
    const int m = grid.node_count();
    Lattice values(grid);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            values(i, j) = grid.bc() == BoundaryKind::HomogeneousDirichlet && grid.is_boundary(i, j)
                               ? 0.0
                               : exact(grid.coord(i), grid.coord(j), t);
        }
    }
    return FieldPair{values, values};
}

FieldPair abs_error_fields(const FieldPair& numeric, const ExactSolution& exact, const GridSpec& grid, double t) {
    validate_fields(grid, numeric);
    FieldPair err = sample_exact(grid, exact, t);
    for (std::size_t k = 0; k < err.u.size(); ++k) {
        err.u[k] = std::abs(numeric.u[k] - err.u[k]);
        err.v[k] = std::abs(numeric.v[k] - err.v[k]);
    }
    return err;
}

double max_abs_error(const FieldPair& numeric, const ExactSolution& exact, const GridSpec& grid, double t) {
    return abs_error_fields(numeric, exact, grid, t).max_value();
}

double estimate_order(const GridSpec& grid, const FieldPair& errors_coarse, const FieldPair& errors_fine) {
    for (const Lattice* l : {&errors_coarse.u, &errors_coarse.v, &errors_fine.u, &errors_fine.v}) {
        require_shape(grid, *l, "estimate_order");
    }
    const int m = grid.node_count();
    auto mean_log_ratio = [&](const Lattice& coarse, const Lattice& fine, double& mean) {
        double sum = 0.0;
        long count = 0;
        for (int j = 1; j < m - 1; ++j) {
            for (int i = 1; i < m - 1; ++i) {
                const double ec = std::abs(coarse(i, j));
                const double ef = std::abs(fine(i, j));
                if (ec < kOrderErrorFloor || ef < kOrderErrorFloor) {
                    continue;
                }
                sum += std::log(ec / ef);
                ++count;
            }
        }
        if (count == 0) {
            return false;
        }
        mean = sum / static_cast<double>(count);
        return true;
    };
    double mean_u = 0.0, mean_v = 0.0;
    const bool has_u = mean_log_ratio(errors_coarse.u, errors_fine.u, mean_u);
    const bool has_v = mean_log_ratio(errors_coarse.v, errors_fine.v, mean_v);
    if (!has_u && !has_v) {
        throw Indeterminate("estimate_order: no interior node has both errors above the floor");
    }
    double best = has_u ? mean_u : mean_v;
    if (has_u && has_v) {
        best = std::max(mean_u, mean_v);
    }
    return best / std::numbers::ln2;
}

}  // namespace skt
