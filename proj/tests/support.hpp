#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "skt/core_types.hpp"
#include "skt/oracle.hpp"

namespace skt::testing {

inline double max_diff(const Lattice& a, const Lattice& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

inline double max_diff(const FieldPair& a, const FieldPair& b) {
    return std::max(max_diff(a.u, b.u), max_diff(a.v, b.v));
}

inline double max_abs(const Lattice& a) {
    double m = 0.0;
    for (double x : a.values()) m = std::max(m, std::abs(x));
    return m;
}

/// Uniform [lo, hi) entries; Dirichlet boundary entries stay zero.
inline Lattice random_lattice(const GridSpec& grid, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Lattice l(grid);
    const int m = grid.node_count();
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const double x = dist(rng);
            if (grid.bc() == BoundaryKind::HomogeneousDirichlet && grid.is_boundary(i, j)) continue;
            l(i, j) = x;
        }
    }
    return l;
}

inline FieldPair random_fields(const GridSpec& grid, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    Lattice u = random_lattice(grid, rng, lo, hi);
    Lattice v = random_lattice(grid, rng, lo, hi);
    return FieldPair{std::move(u), std::move(v)};
}

inline std::vector<double> flat(const Lattice& l) { return {l.values().begin(), l.values().end()}; }

inline Lattice unflat(int side, std::vector<double> v) { return Lattice(side, std::move(v)); }

inline SolverState state_of(FieldPair fields, double t = 0.0) {
    SolverState s;
    s.time = t;
    s.fields = std::move(fields);
    return s;
}

/// A moderately coupled full model with Lotka-Volterra reactions.
inline ModelParams coupled_params() {
    return ModelParams{1.0, 0.8, 0.5, 0.3, 0.7, 0.4, ReactionSpec(LotkaVolterra{1.0, 2.0, 0.2, 0.3, 1.0, 4.0})};
}

inline ModelParams cross_only_params() {
    return ModelParams{1.0, 0.8, 0.0, 0.0, 0.7, 0.4, ReactionSpec(LotkaVolterra{1.0, 2.0, 0.2, 0.3, 1.0, 4.0})};
}

}  // namespace skt::testing

namespace skt::testing {

/// M = 8 grid used by the one-step oracle comparisons. With spacing 1 the
/// steps 1e-3 .. 2.5e-4 are far inside the asymptotic range, so the O(tau^3)
/// halving ratio is not masked by higher-order terms in 1/h^2.
inline GridSpec oracle_grid(BoundaryKind bc) { return GridSpec(7.0, 6, bc); }

inline const double kOracleTaus[] = {1e-3, 5e-4, 2.5e-4};

/// Max-norm gaps between two one-step maps at each of kOracleTaus, and the
/// halving ratios gap(tau) / gap(tau / 2).
template <class StepA, class StepB>
std::vector<double> halving_ratios(const StepA& a, const StepB& b, std::vector<double>* gaps = nullptr) {
    std::vector<double> g;
    for (double tau : kOracleTaus) g.push_back(max_diff(a(tau), b(tau)));
    std::vector<double> ratios;
    for (std::size_t k = 1; k < g.size(); ++k) ratios.push_back(g[k - 1] / g[k]);
    if (gaps) *gaps = g;
    return ratios;
}

}  // namespace skt::testing
