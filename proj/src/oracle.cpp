#include "skt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "skt/operators.hpp"
#include "skt/splitting.hpp"

namespace skt::oracle {

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n * n) {
        throw ShapeError("dense matrix: expected n*n entries");
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) out(k, k) = 1.0;
    return out;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& d) {
    DenseMatrix out(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) out(k, k) = d[k];
    return out;
}

std::vector<double> DenseMatrix::operator*(const std::vector<double>& x) const {
    if (x.size() != n_) throw ShapeError("dense matrix-vector: size mismatch");
    std::vector<double> y(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < n_; ++c) acc += (*this)(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
    if (rhs.n_ != n_) throw ShapeError("dense matrix product: size mismatch");
    DenseMatrix out(n_);
    for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t k = 0; k < n_; ++k) {
            const double a = (*this)(r, k);
            if (a == 0.0) continue;
            for (std::size_t c = 0; c < n_; ++c) out(r, c) += a * rhs(k, c);
        }
    }
    return out;
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& rhs) const {
    if (rhs.n_ != n_) throw ShapeError("dense matrix sum: size mismatch");
    DenseMatrix out(*this);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += rhs.data_[k];
    return out;
}

DenseMatrix DenseMatrix::scaled(double factor) const {
    DenseMatrix out(*this);
    for (double& x : out.data_) x *= factor;
    return out;
}

double DenseMatrix::max_row_sum() const {
    double best = 0.0;
    for (std::size_t r = 0; r < n_; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < n_; ++c) sum += std::abs((*this)(r, c));
        best = std::max(best, sum);
    }
    return best;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    const std::size_t na = a.size(), nb = b.size();
    DenseMatrix out(na * nb);
    for (std::size_t r1 = 0; r1 < na; ++r1)
        for (std::size_t c1 = 0; c1 < na; ++c1)
            for (std::size_t r2 = 0; r2 < nb; ++r2)
                for (std::size_t c2 = 0; c2 < nb; ++c2) out(r1 * nb + r2, c1 * nb + c2) = a(r1, c1) * b(r2, c2);
    return out;
}

std::vector<double> dense_solve(DenseMatrix a, std::vector<double> b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw ShapeError("dense_solve: size mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        }
        if (!(std::abs(a(pivot, col)) > 0.0)) {
            throw SingularSystem("dense_solve: singular matrix at column " + std::to_string(col));
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a(r, col) / a(col, col);
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c) acc -= a(r, c) * x[c];
        x[r] = acc / a(r, r);
    }
    return x;
}

namespace {

void require_small(const GridSpec& grid) {
    if (grid.node_count() > kMaxNodeCount) {
        throw InvalidArgument("oracle: node_count " + std::to_string(grid.node_count()) + " exceeds " +
                              std::to_string(kMaxNodeCount));
    }
}

std::vector<double> flat(const Lattice& l) { return {l.values().begin(), l.values().end()}; }

Lattice unflat(int side, std::vector<double> v) { return Lattice(side, std::move(v)); }

struct Operators {
    DenseMatrix p, r, laplacian, identity;
};

Operators operators_for(const GridSpec& grid) {
    require_small(grid);
    DenseMatrix p = dense_P(grid), r = dense_R(grid);
    DenseMatrix l = p + r;
    return {std::move(p), std::move(r), std::move(l), DenseMatrix::identity(static_cast<std::size_t>(grid.node_count()) *
                                                                            grid.node_count())};
}

// (P + R)(d + s D(own) + c D(partner))
DenseMatrix species_operator(const Operators& ops, double d, double s, double c, const Lattice& own,
                             const Lattice& partner) {
    std::vector<double> diag(own.size());
    for (std::size_t k = 0; k < diag.size(); ++k) diag[k] = d + s * own[k] + c * partner[k];
    return ops.laplacian * DenseMatrix::diagonal(diag);
}

double max_diff(const Lattice& a, const Lattice& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace

DenseMatrix dense_T(const GridSpec& grid) {
    const LineOperator op(grid);
    return DenseMatrix(static_cast<std::size_t>(grid.node_count()), op.dense());
}

DenseMatrix dense_P(const GridSpec& grid) {
    return kron(DenseMatrix::identity(static_cast<std::size_t>(grid.node_count())), dense_T(grid));
}

DenseMatrix dense_R(const GridSpec& grid) {
    return kron(dense_T(grid), DenseMatrix::identity(static_cast<std::size_t>(grid.node_count())));
}

DenseSystem assemble_dense(const GridSpec& grid, const ModelParams& params, const FieldPair& fields) {
    validate_fields(grid, fields);
    const Operators ops = operators_for(grid);
    return {species_operator(ops, params.d1, params.s1, params.c12, fields.u, fields.v),
            species_operator(ops, params.d2, params.s2, params.c21, fields.v, fields.u)};
}

FieldPair dense_cn_step(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                        CnDiagnostics* diagnostics) {
    validate_fields(grid, state.fields);
    const Operators ops = operators_for(grid);
    const int m = grid.node_count();
    const FieldPair& q = state.fields;
    const double half = 0.5 * tau;

    const DenseSystem now = assemble_dense(grid, params, q);
    const ReactionFields react_now = evaluate_reactions(q, grid, params.reaction, state.time);
    const std::vector<double> explicit_u = (ops.identity + now.u_operator.scaled(half)) * flat(q.u);
    const std::vector<double> explicit_v = (ops.identity + now.v_operator.scaled(half)) * flat(q.v);

    FieldPair iterate = euler_predict(state, grid, params, tau);
    CnDiagnostics diag;
    for (int it = 1; it <= kPicardMaxIterations; ++it) {
        const DenseSystem next = assemble_dense(grid, params, iterate);
        const ReactionFields react_next = evaluate_reactions(iterate, grid, params.reaction, state.time + tau);
        std::vector<double> rhs_u = explicit_u, rhs_v = explicit_v;
        for (std::size_t k = 0; k < rhs_u.size(); ++k) {
            rhs_u[k] += half * (react_next.f[k] + react_now.f[k]);
            rhs_v[k] += half * (react_next.g[k] + react_now.g[k]);
        }
        FieldPair updated{unflat(m, dense_solve(ops.identity + next.u_operator.scaled(-half), std::move(rhs_u))),
                          unflat(m, dense_solve(ops.identity + next.v_operator.scaled(-half), std::move(rhs_v)))};
        const double change = std::max(max_diff(updated.u, iterate.u), max_diff(updated.v, iterate.v));
        iterate = std::move(updated);
        diag = {it, change};
        if (change < kPicardTolerance) {
            if (diagnostics) *diagnostics = diag;
            return iterate;
        }
    }
    if (diagnostics) *diagnostics = diag;
    throw NonConvergence("dense_cn_step: Picard iteration did not converge in " +
                         std::to_string(kPicardMaxIterations) + " iterations (last update " +
                         std::to_string(diag.last_update) + ")");
}

namespace {

Lattice factored_species(const Operators& ops, const Lattice& own, const Lattice& partner, const Lattice& own_next,
                         const Lattice& partner_next, double d, double s, double c, const Lattice& reaction,
                         const Lattice& reaction_next, double tau) {
    const double half = 0.5 * tau;
    auto diag = [](const Lattice& l) { return DenseMatrix::diagonal(flat(l)); };
    const DenseMatrix& id = ops.identity;

    // Factors in left-to-right order: linear P, linear R, self P, self R, cross P, cross R.
    const DenseMatrix rhs_factors[] = {
        id + ops.p.scaled(half * d),
        id + ops.r.scaled(half * d),
        id + (ops.p * diag(own)).scaled(half * s),
        id + (ops.r * diag(own)).scaled(half * s),
        id + (ops.p * diag(partner)).scaled(half * c),
        id + (ops.r * diag(partner)).scaled(half * c),
    };
    const DenseMatrix lhs_factors[] = {
        id + ops.p.scaled(-half * d),
        id + ops.r.scaled(-half * d),
        id + (ops.p * diag(own_next)).scaled(-half * s),
        id + (ops.r * diag(own_next)).scaled(-half * s),
        id + (ops.p * diag(partner_next)).scaled(-half * c),
        id + (ops.r * diag(partner_next)).scaled(-half * c),
    };

    std::vector<double> x = flat(own);
    for (int k = 5; k >= 0; --k) x = rhs_factors[k] * x;
    for (std::size_t n = 0; n < x.size(); ++n) x[n] += half * (reaction_next[n] + reaction[n]);
    for (const DenseMatrix& factor : lhs_factors) x = dense_solve(factor, std::move(x));
    return unflat(own.side(), std::move(x));
}

}  // namespace

FieldPair factored_step(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                        const SchemeOptions& options) {
    validate_fields(grid, state.fields);
    const Operators ops = operators_for(grid);
    const FieldPair& q = state.fields;
    const ReactionFields now = evaluate_reactions(q, grid, params.reaction, state.time);
    const FieldPair predicted = predict_next(state, grid, params, tau, options);
    const ReactionFields next = evaluate_reactions(predicted, grid, params.reaction, state.time + tau);
    return FieldPair{factored_species(ops, q.u, q.v, predicted.u, predicted.v, params.d1, params.s1, params.c12,
                                      now.f, next.f, tau),
                     factored_species(ops, q.v, q.u, predicted.v, predicted.u, params.d2, params.s2, params.c21,
                                      now.g, next.g, tau)};
}

}  // namespace skt::oracle
