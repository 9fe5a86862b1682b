#pragma once

#include <cstddef>
#include <vector>

#include "skt/core_types.hpp"
#include "skt/splitting.hpp"

// Dense reference implementations for small grids (node_count <= 12).
// Not a production path: everything here is O(M^6) and exists to check the
// splitting against the unsplit Crank-Nicolson system and its factored form.
namespace skt::oracle {

inline constexpr int kMaxNodeCount = 12;

class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
    DenseMatrix(std::size_t n, std::vector<double> row_major);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(const std::vector<double>& d);

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * n_ + c]; }

    std::vector<double> operator*(const std::vector<double>& x) const;
    DenseMatrix operator*(const DenseMatrix& rhs) const;
    DenseMatrix operator+(const DenseMatrix& rhs) const;
    DenseMatrix scaled(double factor) const;

    /// Largest absolute row sum (induced infinity norm).
    double max_row_sum() const;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Kronecker product; (A (x) B)[(r1, r2), (c1, c2)] = A[r1, c1] * B[r2, c2].
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

/// Gaussian elimination with partial pivoting. Throws SingularSystem.
std::vector<double> dense_solve(DenseMatrix a, std::vector<double> b);

DenseMatrix dense_T(const GridSpec& grid);
DenseMatrix dense_P(const GridSpec& grid);  // I (x) T
DenseMatrix dense_R(const GridSpec& grid);  // T (x) I

struct DenseSystem {
    DenseMatrix u_operator;  // (P + R)(d1 + s1 D(u) + c12 D(v))
    DenseMatrix v_operator;  // (P + R)(d2 + s2 D(v) + c21 D(u))
};

/// Assembled semidiscrete operators. Refuses grids with node_count > 12.
DenseSystem assemble_dense(const GridSpec& grid, const ModelParams& params, const FieldPair& fields);

struct CnDiagnostics {
    int iterations = 0;
    double last_update = 0.0;
};

inline constexpr double kPicardTolerance = 1e-12;
inline constexpr int kPicardMaxIterations = 100;

/// Unsplit Crank-Nicolson step solved by Picard iteration: the time-level
/// k+1 diagonals and endpoint reactions are frozen at the previous iterate,
/// starting from the Euler predictor. Converged when successive iterates
/// differ by less than 1e-12 in max norm; NonConvergence after 100 sweeps.
FieldPair dense_cn_step(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                        CnDiagnostics* diagnostics = nullptr);

/// Factored form: the RHS factor product applied to q_k plus the trapezoidal
/// reaction term (predicted endpoint), then the LHS factors inverted one at a
/// time by dense solves. Self-diffusion factors are identities when s = 0.
/// The endpoint comes from predict_next with the same options as the splitting.
FieldPair factored_step(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                        const SchemeOptions& options = {});

}  // namespace skt::oracle
