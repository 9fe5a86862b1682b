#include "skt/splitting.hpp"

#include <cmath>

#include "skt/operators.hpp"
#include "skt/tridiag_solver.hpp"

namespace skt {

ReactionFields evaluate_reactions(const FieldPair& fields, const GridSpec& grid, const ReactionSpec& spec, double t) {
    require_shape(grid, fields.u, "evaluate_reactions u");
    require_shape(grid, fields.v, "evaluate_reactions v");
    const int m = grid.node_count();
    ReactionFields out{Lattice(m), Lattice(m)};
    if (spec.is_zero()) {
        return out;
    }
    const bool pinned = grid.bc() == BoundaryKind::HomogeneousDirichlet;
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            if (pinned && grid.is_boundary(i, j)) continue;
            const auto r = spec.evaluate(fields.u(i, j), fields.v(i, j), grid.coord(i), grid.coord(j), t);
            out.f(i, j) = r.f;
            out.g(i, j) = r.g;
        }
    }
    return out;
}

namespace {

// Operator applications of one species that every stage reuses.
struct SpeciesTerms {
    Lattice p_own, r_own;          // P q, R q
    Lattice p_self, r_self;        // P D(q) q, R D(q) q
    Lattice p_cross, r_cross;      // P D(p) q, R D(p) q
};

struct Coefficients {
    double d, s, c;
};

SpeciesTerms species_terms(const GridSpec& grid, const Lattice& own, const Lattice& partner) {
    return SpeciesTerms{apply_P(grid, own),          apply_R(grid, own),
                        apply_P(grid, own, own),     apply_R(grid, own, own),
                        apply_P(grid, own, partner), apply_R(grid, own, partner)};
}

Lattice predict_species(const Lattice& own, const SpeciesTerms& t, Coefficients k, const Lattice& reaction,
                        double tau) {
    Lattice out(own.side());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double lap = k.d * (t.p_own[n] + t.r_own[n]) + k.s * (t.p_self[n] + t.r_self[n]) +
                           k.c * (t.p_cross[n] + t.r_cross[n]);
        out[n] = own[n] + tau * lap + tau * reaction[n];
    }
    return out;
}

// Factor (I - coef * X * D(diag)) applied inversely; a zero coefficient is the identity.
Lattice implicit_stage(const GridSpec& grid, double coef, const Lattice& diag, const Lattice& rhs, bool along_x) {
    if (coef == 0.0) {
        return rhs;
    }
    return along_x ? solve_shifted_x(grid, coef, diag, rhs) : solve_shifted_y(grid, coef, diag, rhs);
}

// Sub-steps for one species. own_next and partner_next are the predicted
// diagonals; reaction_next is evaluated at the predicted fields.
Lattice advance_species(const GridSpec& grid, const Lattice& own, const SpeciesTerms& t, Coefficients k,
                        const Lattice& own_next, const Lattice& partner_next, const Lattice& reaction,
                        const Lattice& reaction_next, double tau) {
    const int m = own.side();
    const double half = 0.5 * tau;
    const double ad = half * k.d, as = half * k.s, ac = half * k.c;
    const Lattice ones(m, 1.0);

    Lattice rhs(m);
    for (std::size_t n = 0; n < rhs.size(); ++n) {
        rhs[n] = own[n] + ad * (t.p_own[n] + 2.0 * t.r_own[n]) +
                 tau * (k.s * (t.p_self[n] + t.r_self[n]) + k.c * (t.p_cross[n] + t.r_cross[n])) +
                 tau * reaction[n];
    }
    Lattice w = implicit_stage(grid, ad, ones, rhs, true);

    for (std::size_t n = 0; n < rhs.size(); ++n) rhs[n] = w[n] - ad * t.r_own[n];
    w = implicit_stage(grid, ad, ones, rhs, false);

    if (as != 0.0) {
        for (std::size_t n = 0; n < rhs.size(); ++n) rhs[n] = w[n] - as * t.p_self[n];
        w = implicit_stage(grid, as, own_next, rhs, true);

        for (std::size_t n = 0; n < rhs.size(); ++n) rhs[n] = w[n] - as * t.r_self[n];
        w = implicit_stage(grid, as, own_next, rhs, false);
    }

    if (ac != 0.0) {
        for (std::size_t n = 0; n < rhs.size(); ++n) rhs[n] = w[n] - ac * t.p_cross[n];
        w = implicit_stage(grid, ac, partner_next, rhs, true);
    }

    for (std::size_t n = 0; n < rhs.size(); ++n) {
        rhs[n] = w[n] - ac * t.r_cross[n] + half * (reaction_next[n] - reaction[n]);
    }
    return implicit_stage(grid, ac, partner_next, rhs, false);
}

void check_step_inputs(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau) {
    validate_fields(grid, state.fields);
    params.validate();
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("step size must be finite and nonnegative");
    }
}

struct StepInputs {
    Coefficients ku, kv;
    SpeciesTerms tu, tv;
    ReactionFields now;
};

StepInputs step_inputs(const SolverState& state, const GridSpec& grid, const ModelParams& params, bool self_terms) {
    const FieldPair& q = state.fields;
    return StepInputs{{params.d1, self_terms ? params.s1 : 0.0, params.c12},
                      {params.d2, self_terms ? params.s2 : 0.0, params.c21},
                      species_terms(grid, q.u, q.v),
                      species_terms(grid, q.v, q.u),
                      evaluate_reactions(q, grid, params.reaction, state.time)};
}

FieldPair predict(const SolverState& state, const GridSpec& grid, const StepInputs& in, double tau,
                  Predictor predictor) {
    const FieldPair& q = state.fields;
    if (predictor == Predictor::ExplicitEuler) {
        return FieldPair{predict_species(q.u, in.tu, in.ku, in.now.f, tau),
                         predict_species(q.v, in.tv, in.kv, in.now.g, tau)};
    }
    return FieldPair{advance_species(grid, q.u, in.tu, in.ku, q.u, q.v, in.now.f, in.now.f, tau),
                     advance_species(grid, q.v, in.tv, in.kv, q.v, q.u, in.now.g, in.now.g, tau)};
}

FieldPair run_step(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                   bool self_stages, const SchemeOptions& options) {
    check_step_inputs(state, grid, params, tau);
    const FieldPair& q = state.fields;
    const StepInputs in = step_inputs(state, grid, params, self_stages);

    const FieldPair predicted = predict(state, grid, in, tau, options.predictor);
    const ReactionFields next = evaluate_reactions(predicted, grid, params.reaction, state.time + tau);

    return FieldPair{
        advance_species(grid, q.u, in.tu, in.ku, predicted.u, predicted.v, in.now.f, next.f, tau),
        advance_species(grid, q.v, in.tv, in.kv, predicted.v, predicted.u, in.now.g, next.g, tau)};
}

}  // namespace

FieldPair euler_predict(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau) {
    return predict_next(state, grid, params, tau, SchemeOptions{Predictor::ExplicitEuler});
}

FieldPair predict_next(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                       const SchemeOptions& options) {
    check_step_inputs(state, grid, params, tau);
    return predict(state, grid, step_inputs(state, grid, params, true), tau, options.predictor);
}

FieldPair step_cross_only(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                          const SchemeOptions& options) {
    if (params.has_self_diffusion()) {
        throw InvalidArgument("step_cross_only: requires s1 = s2 = 0");
    }
    return run_step(state, grid, params, tau, false, options);
}

FieldPair step_full(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                    const SchemeOptions& options) {
    return run_step(state, grid, params, tau, true, options);
}

FieldPair scheme_step(const SolverState& state, const GridSpec& grid, const ModelParams& params, double tau,
                      const SchemeOptions& options) {
    return params.has_self_diffusion() ? step_full(state, grid, params, tau, options)
                                       : step_cross_only(state, grid, params, tau, options);
}

}  // namespace skt
