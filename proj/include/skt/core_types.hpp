#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace skt {

// Error hierarchy shared by every module.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct InvalidArgument : Error {
    using Error::Error;
};
struct SingularSystem : Error {
    using Error::Error;
};
struct NonConvergence : Error {
    using Error::Error;
};
struct Indeterminate : Error {
    using Error::Error;
};

enum class BoundaryKind { HomogeneousNeumann, HomogeneousDirichlet };

/// Uniform mesh over the square [0, L]^2 with N interior nodes per side.
///
/// Boundary nodes are stored for both boundary kinds, so every lattice has
/// node_count() = N + 2 entries per side and spacing L / (N + 1).
class GridSpec {
public:
    GridSpec(double side_length, int interior_count, BoundaryKind bc);

    double side_length() const noexcept { return side_length_; }
    int interior_count() const noexcept { return interior_count_; }
    int node_count() const noexcept { return interior_count_ + 2; }
    double spacing() const noexcept { return spacing_; }
    BoundaryKind bc() const noexcept { return bc_; }

    /// Coordinate of node index i along either axis.
    double coord(int i) const noexcept { return i * spacing_; }
    bool is_boundary(int i, int j) const noexcept;

private:
    double side_length_;
    int interior_count_;
    double spacing_;
    BoundaryKind bc_;
};

/// Square node lattice stored flat with x as the fast index: (i, j) -> j*M + i.
class Lattice {
public:
    Lattice() = default;
    explicit Lattice(int side, double fill = 0.0);
    explicit Lattice(const GridSpec& grid, double fill = 0.0) : Lattice(grid.node_count(), fill) {}
    Lattice(int side, std::vector<double> values);

    int side() const noexcept { return side_; }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(int i, int j) noexcept { return data_[static_cast<std::size_t>(j) * side_ + i]; }
    double operator()(int i, int j) const noexcept { return data_[static_cast<std::size_t>(j) * side_ + i]; }
    double& operator[](std::size_t k) noexcept { return data_[k]; }
    double operator[](std::size_t k) const noexcept { return data_[k]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    std::span<double> row(int j) noexcept { return values().subspan(static_cast<std::size_t>(j) * side_, side_); }
    std::span<const double> row(int j) const noexcept {
        return values().subspan(static_cast<std::size_t>(j) * side_, side_);
    }

    double max() const;
    double min() const;
    Lattice transposed() const;

    friend bool operator==(const Lattice&, const Lattice&) = default;

private:
    int side_ = 0;
    std::vector<double> data_;
};

void require_shape(const GridSpec& grid, const Lattice& field, const char* what);

/// The two species lattices at one time level.
struct FieldPair {
    Lattice u;
    Lattice v;

    double max_value() const;
    double min_value() const;
    friend bool operator==(const FieldPair&, const FieldPair&) = default;
};

/// Checks shapes and, for Dirichlet grids, that boundary entries are exactly zero.
void validate_fields(const GridSpec& grid, const FieldPair& fields);

/// Number of strictly negative entries across both species.
std::size_t count_negative(const FieldPair& fields);

// Reaction kinds. The manufactured kinds are space-time forcings that balance
// the unit-coefficient model (d = s = c = 1) against the exact solutions in
// verification.hpp.
struct ZeroReaction {};
// spacing > 0 selects the grid-consistent forcing for that node spacing;
// spacing == 0 uses the continuous forcing.
struct ManufacturedDirichlet {
    double spacing = 0.0;
};
struct ManufacturedNeumann {
    double a = 1.0;
    double spacing = 0.0;
};
struct LotkaVolterra {
    double a1, b1, c1, a2, b2, c2;
};
struct LogisticBlowup {
    double a1, b1, a2, b2;
};

struct ReactionValue {
    double f;
    double g;
};

class ReactionSpec {
public:
    using Kind = std::variant<ZeroReaction, ManufacturedDirichlet, ManufacturedNeumann, LotkaVolterra, LogisticBlowup>;

    ReactionSpec() = default;
    ReactionSpec(Kind kind) : kind_(kind) {}  // NOLINT(google-explicit-constructor)

    const Kind& kind() const noexcept { return kind_; }
    bool is_zero() const noexcept { return std::holds_alternative<ZeroReaction>(kind_); }

    ReactionValue evaluate(double u, double v, double x, double y, double t) const;

private:
    Kind kind_ = ZeroReaction{};
};

/// Diffusion, self-diffusion and cross-diffusion coefficients plus reactions.
struct ModelParams {
    double d1 = 1.0;
    double d2 = 1.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double c12 = 0.0;
    double c21 = 0.0;
    ReactionSpec reaction;

    void validate() const;
    bool has_self_diffusion() const noexcept { return s1 != 0.0 || s2 != 0.0; }
};

/// Largest of the six diffusion coefficients.
double kappa(const ModelParams& params);

enum class RunStatus { Running, ReachedFinalTime, BlowupDetected };

const char* to_string(RunStatus status);

struct SolverState {
    double time = 0.0;
    double step = 0.0;
    FieldPair fields;
    std::int64_t step_index = 0;
    RunStatus status = RunStatus::Running;
};

}  // namespace skt
