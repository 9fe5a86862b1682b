#include "skt/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skt/verification.hpp"

namespace skt {

GridSpec::GridSpec(double side_length, int interior_count, BoundaryKind bc)
    : side_length_(side_length), interior_count_(interior_count), spacing_(0.0), bc_(bc) {
    if (!(side_length > 0.0) || !std::isfinite(side_length)) {
        throw InvalidArgument("grid: side_length must be positive and finite");
    }
    if (interior_count < 1) {
        throw InvalidArgument("grid: interior_count must be at least 1");
    }
    spacing_ = side_length / (interior_count + 1);
}

bool GridSpec::is_boundary(int i, int j) const noexcept {
    const int last = node_count() - 1;
    return i == 0 || j == 0 || i == last || j == last;
}

Lattice::Lattice(int side, double fill) : side_(side) {
    if (side < 1) {
        throw ShapeError("lattice: side must be positive");
    }
    data_.assign(static_cast<std::size_t>(side) * side, fill);
}

Lattice::Lattice(int side, std::vector<double> values) : side_(side), data_(std::move(values)) {
    if (side < 1 || data_.size() != static_cast<std::size_t>(side) * side) {
        throw ShapeError("lattice: value count does not match side*side");
    }
}

double Lattice::max() const { return *std::max_element(data_.begin(), data_.end()); }

double Lattice::min() const { return *std::min_element(data_.begin(), data_.end()); }

Lattice Lattice::transposed() const {
    Lattice out(side_);
    for (int j = 0; j < side_; ++j) {
        for (int i = 0; i < side_; ++i) {
            out(j, i) = (*this)(i, j);
        }
    }
    return out;
}

void require_shape(const GridSpec& grid, const Lattice& field, const char* what) {
    if (field.side() != grid.node_count()) {
        throw ShapeError(std::string(what) + ": lattice side " + std::to_string(field.side()) +
                         " does not match grid node count " + std::to_string(grid.node_count()));
    }
}

double FieldPair::max_value() const { return std::max(u.max(), v.max()); }

double FieldPair::min_value() const { return std::min(u.min(), v.min()); }

void validate_fields(const GridSpec& grid, const FieldPair& fields) {
    require_shape(grid, fields.u, "field u");
    require_shape(grid, fields.v, "field v");
    if (grid.bc() != BoundaryKind::HomogeneousDirichlet) {
        return;
    }
    const int m = grid.node_count();
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            if (grid.is_boundary(i, j) && (fields.u(i, j) != 0.0 || fields.v(i, j) != 0.0)) {
                throw InvalidArgument("fields: Dirichlet boundary entry is nonzero at node (" + std::to_string(i) +
                                      ", " + std::to_string(j) + ")");
            }
        }
    }
}

std::size_t count_negative(const FieldPair& fields) {
    auto negatives = [](const Lattice& l) {
        return static_cast<std::size_t>(
            std::count_if(l.values().begin(), l.values().end(), [](double x) { return x < 0.0; }));
    };
    return negatives(fields.u) + negatives(fields.v);
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

ReactionValue ReactionSpec::evaluate(double u, double v, double x, double y, double t) const {
    return std::visit(
        Overloaded{
            [](const ZeroReaction&) { return ReactionValue{0.0, 0.0}; },
            [&](const ManufacturedDirichlet& m) {
                const double f = m.spacing > 0.0 ? discrete_forcing_dirichlet(x, y, t, m.spacing)
                                                 : forcing_dirichlet(x, y, t);
                return ReactionValue{f, f};
            },
            [&](const ManufacturedNeumann& m) {
                const double f = m.spacing > 0.0 ? discrete_forcing_neumann(m.a, x, y, t, m.spacing)
                                                 : forcing_neumann(m.a, x, y, t);
                return ReactionValue{f, f};
            },
            [&](const LotkaVolterra& r) {
                return ReactionValue{u * (r.a1 - r.b1 * u + r.c1 * v), v * (r.a2 - r.c2 * v + r.b2 * u)};
            },
            [&](const LogisticBlowup& r) {
                return ReactionValue{u * (r.a1 + r.b1 * u), v * (r.a2 + r.b2 * v)};
            },
        },
        kind_);
}

void ModelParams::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(d1) || !(d1 > 0.0)) throw InvalidArgument("d1 must be > 0");
    if (!finite(d2) || !(d2 > 0.0)) throw InvalidArgument("d2 must be > 0");
    if (!finite(s1) || s1 < 0.0) throw InvalidArgument("s1 must be >= 0");
    if (!finite(s2) || s2 < 0.0) throw InvalidArgument("s2 must be >= 0");
    if (!finite(c12) || c12 < 0.0) throw InvalidArgument("c12 must be >= 0");
    if (!finite(c21) || c21 < 0.0) throw InvalidArgument("c21 must be >= 0");
    auto check_spacing = [&](double h) {
        if (!finite(h) || h < 0.0) throw InvalidArgument("manufactured forcing spacing must be >= 0");
    };
    if (const auto* m = std::get_if<ManufacturedDirichlet>(&reaction.kind())) check_spacing(m->spacing);
    if (const auto* m = std::get_if<ManufacturedNeumann>(&reaction.kind())) {
        check_spacing(m->spacing);
        if (!finite(m->a)) throw InvalidArgument("manufactured Neumann offset must be finite");
    }
}

double kappa(const ModelParams& params) {
    return std::max({params.d1, params.d2, params.s1, params.s2, params.c12, params.c21});
}

const char* to_string(RunStatus status) {
    switch (status) {
        case RunStatus::Running:
            return "running";
        case RunStatus::ReachedFinalTime:
            return "reached_final_time";
        case RunStatus::BlowupDetected:
            return "blowup_detected";
    }
    return "unknown";
}

}  // namespace skt
