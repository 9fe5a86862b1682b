#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "skt/operators.hpp"
#include "skt/verification.hpp"
#include "support.hpp"

using namespace skt;
using namespace skt::testing;

TEST_CASE("exact_dirichlet") {
    CHECK(exact_dirichlet(0.5, 0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(exact_dirichlet(0.0, 0.3, 0.2)) < 1e-15);
    CHECK(std::abs(exact_dirichlet(0.7, 1.0, 0.0)) < 1e-15);
    CHECK(exact_dirichlet(0.25, 0.25, 0.01) == doctest::Approx(0.410434).epsilon(1e-6));
    CHECK(exact_dirichlet(0.25, 0.25, 0.01) == doctest::Approx(0.5 * std::exp(-0.02 * std::numbers::pi * std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("exact_neumann") {
    CHECK(exact_neumann(1.0, 0.0, 0.0, 0.0) == 2.0);
    CHECK(exact_neumann(1.0, 0.5, 0.3, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(exact_neumann(1.0, 0.0, 0.0, 0.1) == doctest::Approx(1.372708).epsilon(1e-6));
}

namespace {

// Residual of the semidiscrete system at the sampled exact solution:
//   du/dt - (P + R)(u + 2 u^2) - f   on interior nodes (u = v, d = s = c = 1).
template <class Exact, class Dudt, class Forcing>
double semidiscrete_residual(const GridSpec& g, const Exact& exact, const Dudt& dudt, const Forcing& forcing,
                             double t) {
    Lattice u(g), flux(g);
    const int m = g.node_count();
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            u(i, j) = exact(g.coord(i), g.coord(j), t);
            flux(i, j) = u(i, j) + 2.0 * u(i, j) * u(i, j);
        }
    }
    const Lattice lap = apply_laplacian(g, flux);
    double worst = 0.0;
    for (int j = 1; j < m - 1; ++j) {
        for (int i = 1; i < m - 1; ++i) {
            const double x = g.coord(i), y = g.coord(j);
            worst = std::max(worst, std::abs(dudt(x, y, t) - lap(i, j) - forcing(x, y, t)));
        }
    }
    return worst;
}

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

}  // namespace

TEST_CASE("forcing transcription is consistent with the discretization") {
    const double t = 0.03;
    const auto d_exact = [](double x, double y, double s) { return exact_dirichlet(x, y, s); };
    const auto d_dudt = [](double x, double y, double s) { return -2.0 * kPi2 * exact_dirichlet(x, y, s); };
    const auto n_exact = [](double x, double y, double s) { return exact_neumann(1.0, x, y, s); };
    const auto n_dudt = [](double x, double y, double s) { return exact_neumann(0.0, x, y, s) * -kPi2; };

    SUBCASE("continuous forcing: residual is O(h^2)") {
        const GridSpec coarse(1.0, 19, BoundaryKind::HomogeneousDirichlet), fine(1.0, 39, BoundaryKind::HomogeneousDirichlet);
        const double rd = semidiscrete_residual(coarse, d_exact, d_dudt, forcing_dirichlet, t) /
                          semidiscrete_residual(fine, d_exact, d_dudt, forcing_dirichlet, t);
        CHECK(rd == doctest::Approx(4.0).epsilon(0.05));

        const GridSpec nc(1.0, 19, BoundaryKind::HomogeneousNeumann), nf(1.0, 39, BoundaryKind::HomogeneousNeumann);
        const auto fn = [](double x, double y, double s) { return forcing_neumann(1.0, x, y, s); };
        const double rn = semidiscrete_residual(nc, n_exact, n_dudt, fn, t) / semidiscrete_residual(nf, n_exact, n_dudt, fn, t);
        CHECK(rn == doctest::Approx(4.0).epsilon(0.05));
    }
    SUBCASE("grid-consistent forcing: residual is round-off") {
        const GridSpec g(1.0, 19, BoundaryKind::HomogeneousDirichlet);
        const double h = g.spacing();
        const auto fd = [h](double x, double y, double s) { return discrete_forcing_dirichlet(x, y, s, h); };
        CHECK(semidiscrete_residual(g, d_exact, d_dudt, fd, t) < 1e-9);

        const GridSpec n(1.0, 19, BoundaryKind::HomogeneousNeumann);
        const auto fn = [h](double x, double y, double s) { return discrete_forcing_neumann(1.0, x, y, s, h); };
        CHECK(semidiscrete_residual(n, n_exact, n_dudt, fn, t) < 1e-9);
    }
    SUBCASE("both forcings agree as h -> 0") {
        CHECK(discrete_forcing_dirichlet(0.3, 0.6, t, 1e-3) == doctest::Approx(forcing_dirichlet(0.3, 0.6, t)).epsilon(1e-5));
        CHECK(discrete_forcing_neumann(1.0, 0.3, 0.6, t, 1e-3) ==
              doctest::Approx(forcing_neumann(1.0, 0.3, 0.6, t)).epsilon(1e-5));
    }
}

TEST_CASE("Neumann forcing at a = 1 has the leading coefficient 9") {
    const double x = 0.2, y = 0.7, t = 0.05;
    const double cx = std::cos(std::numbers::pi * x), cy = std::cos(std::numbers::pi * y);
    const double sx = std::sin(std::numbers::pi * x), sy = std::sin(std::numbers::pi * y);
    const double printed = std::exp(-2.0 * kPi2 * t) * kPi2 *
                           (9.0 * std::exp(kPi2 * t) * cx * cy + 8.0 * cx * cx * cy * cy - 4.0 * cy * cy * sx * sx -
                            4.0 * cx * cx * sy * sy);
    CHECK(forcing_neumann(1.0, x, y, t) == doctest::Approx(printed).epsilon(1e-14));
}

TEST_CASE("error measures") {
    const GridSpec g(1.0, 9, BoundaryKind::HomogeneousDirichlet);
    const FieldPair exact = sample_exact(g, exact_dirichlet, 0.1);
    CHECK(max_abs_error(exact, exact_dirichlet, g, 0.1) == 0.0);
    FieldPair off = exact;
    off.v(3, 4) += 0.25;
    CHECK(max_abs_error(off, exact_dirichlet, g, 0.1) == doctest::Approx(0.25));
    const FieldPair err = abs_error_fields(off, exact_dirichlet, g, 0.1);
    CHECK(err.u.max() == 0.0);
}

TEST_CASE("estimate_order") {
    std::mt19937_64 rng(2);
    const GridSpec g(1.0, 9, BoundaryKind::HomogeneousNeumann);
    const FieldPair coarse = random_fields(g, rng, 1e-6, 1e-3);
    FieldPair fine = coarse;
    for (std::size_t k = 0; k < fine.u.size(); ++k) {
        fine.u[k] /= 4.0;
        fine.v[k] /= 4.0;
    }

    SUBCASE("quartered errors give p = 2") { CHECK(estimate_order(g, coarse, fine) == doctest::Approx(2.0).epsilon(1e-14)); }
    SUBCASE("scale invariance") {
        for (double scale : {1e-3, 0.5, 7.0, 1e4}) {
            FieldPair c2 = coarse, f2 = fine;
            for (std::size_t k = 0; k < c2.u.size(); ++k) {
                c2.u[k] *= scale;
                c2.v[k] *= scale;
                f2.u[k] *= scale;
                f2.v[k] *= scale;
            }
            CHECK(estimate_order(g, c2, f2) == doctest::Approx(2.0).epsilon(1e-12));
        }
    }
    SUBCASE("max over species") {
        FieldPair f2 = fine;
        for (std::size_t k = 0; k < f2.v.size(); ++k) f2.v[k] = coarse.v[k] / 8.0;
        CHECK(estimate_order(g, coarse, f2) == doctest::Approx(3.0).epsilon(1e-14));
    }
    SUBCASE("nodes under the floor are dropped") {
        FieldPair c2 = coarse, f2 = fine;
        c2.u(3, 3) = 1e-15;  // would contribute a huge negative log ratio
        f2.v(4, 4) = 0.0;
        CHECK(estimate_order(g, c2, f2) == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("boundary nodes are ignored") {
        FieldPair c2 = coarse;
        c2.u(0, 0) = 1e6;
        CHECK(estimate_order(g, c2, fine) == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("indeterminate when no node is admissible") {
        const FieldPair zero{Lattice(g), Lattice(g)};
        CHECK_THROWS_AS(estimate_order(g, zero, fine), Indeterminate);
    }
    SUBCASE("shape checks") {
        const FieldPair wrong{Lattice(4), Lattice(4)};
        CHECK_THROWS_AS(estimate_order(g, wrong, fine), ShapeError);
    }
}
