#include "skt/scenario.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <system_error>

#include "skt/operators.hpp"
#include "skt/verification.hpp"

namespace skt {

const char* to_string(ScenarioKind kind) noexcept {
    switch (kind) {
        case ScenarioKind::Example1Dirichlet:
            return "example1_dirichlet";
        case ScenarioKind::Example1Neumann:
            return "example1_neumann";
        case ScenarioKind::Example2:
            return "example2";
        case ScenarioKind::Example3:
            return "example3";
        case ScenarioKind::Custom:
            return "custom";
    }
    return "unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------- parsing

struct Entry {
    std::string key;
    std::string value;
    std::string origin;  // "line N" or "override 'k=v'"
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

Entry split_pair(std::string_view line, const std::string& origin) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        throw InvalidArgument(origin + ": expected key=value");
    }
    Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), origin};
    if (e.key.empty()) throw InvalidArgument(origin + ": empty key");
    if (e.value.empty()) throw InvalidArgument(origin + ": empty value for '" + e.key + "'");
    return e;
}

std::vector<Entry> tokenize(std::string_view text, const std::vector<std::string>& overrides) {
    std::vector<Entry> entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!trim(line).empty()) entries.push_back(split_pair(line, "line " + std::to_string(line_no)));
        pos = end + 1;
    }
    for (const std::string& o : overrides) {
        entries.push_back(split_pair(o, "override '" + o + "'"));
    }
    return entries;
}

[[noreturn]] void bad_value(const Entry& e, const std::string& expected) {
    throw InvalidArgument(e.origin + ": invalid value '" + e.value + "' for '" + e.key + "' (expected " + expected +
                          ")");
}

double parse_double(const Entry& e) {
    double out = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || !std::isfinite(out)) bad_value(e, "a finite number");
    return out;
}

long long parse_integer(const Entry& e) {
    long long out = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) bad_value(e, "an integer");
    return out;
}

int parse_int(const Entry& e) {
    const long long v = parse_integer(e);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) bad_value(e, "an int");
    return static_cast<int>(v);
}

bool parse_bool(const Entry& e) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    bad_value(e, "true or false");
}

std::vector<int> parse_int_list(const Entry& e) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= e.value.size()) {
        const auto end = std::min(e.value.find(',', pos), e.value.size());
        Entry item{e.key, trim(std::string_view(e.value).substr(pos, end - pos)), e.origin};
        if (item.value.empty()) bad_value(e, "a comma-separated integer list");
        out.push_back(parse_int(item));
        pos = end + 1;
    }
    return out;
}

std::array<int, 3> parse_triple(const Entry& e) {
    const std::vector<int> v = parse_int_list(e);
    if (v.size() != 3) bad_value(e, "three comma-separated integers");
    return {v[0], v[1], v[2]};
}

template <class Enum>
Enum parse_enum(const Entry& e, std::initializer_list<std::pair<const char*, Enum>> names) {
    std::string expected;
    for (const auto& [name, value] : names) {
        if (e.value == name) return value;
        expected += expected.empty() ? name : std::string("|") + name;
    }
    bad_value(e, expected);
}

ScenarioKind parse_kind(const Entry& e) {
    return parse_enum<ScenarioKind>(e, {{"example1_dirichlet", ScenarioKind::Example1Dirichlet},
                                        {"example1_neumann", ScenarioKind::Example1Neumann},
                                        {"example2", ScenarioKind::Example2},
                                        {"example3", ScenarioKind::Example3},
                                        {"custom", ScenarioKind::Custom}});
}

ScenarioConfig defaults_for(ScenarioKind kind) {
    ScenarioConfig c;
    c.scenario = kind;
    switch (kind) {
        case ScenarioKind::Example1Dirichlet:
        case ScenarioKind::Example1Neumann:
            c.L = 1.0;
            c.N = 49;  // delta = 1/50
            c.bc = kind == ScenarioKind::Example1Dirichlet ? BoundaryKind::HomogeneousDirichlet
                                                           : BoundaryKind::HomogeneousNeumann;
            c.d1 = c.d2 = c.s1 = c.s2 = c.c12 = c.c21 = 1.0;
            c.T = 0.1;
            // max field is 1 + a = 2 under Neumann, which halves the admissible step
            c.tau = kind == ScenarioKind::Example1Dirichlet ? 1e-4 : 5e-5;
            c.fixed_tau = true;
            break;
        case ScenarioKind::Example2:
            c.L = kPi;
            c.N = 63;  // delta = pi/64
            c.bc = BoundaryKind::HomogeneousNeumann;
            c.d1 = 0.01;
            c.d2 = 0.1;
            c.s1 = 0.05;
            c.s2 = 0.4;
            c.c12 = 0.12;
            c.c21 = 0.06;
            c.a1 = 1.0;
            c.b1 = 2.0;
            c.c1 = 0.2;
            c.a2 = 0.3;
            c.b2 = 1.0;
            c.c2 = 4.0;
            c.T = 200.0;
            c.record_every = 100;
            break;
        case ScenarioKind::Example3:
            c.L = kPi;
            c.N = 63;
            c.bc = BoundaryKind::HomogeneousDirichlet;
            c.d1 = c.d2 = 1.0;
            c.s1 = c.s2 = 0.05;
            c.c12 = c.c21 = 0.0;
            c.a1 = c.a2 = 3.0;
            c.b1 = c.b2 = 4.0;
            c.T = 5.0;
            break;
        case ScenarioKind::Custom:
            break;
    }
    return c;
}

using Setter = std::function<void(ScenarioConfig&, const Entry&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto num = [&t](const char* key, double ScenarioConfig::*field) {
            t[key] = [field](ScenarioConfig& c, const Entry& e) { c.*field = parse_double(e); };
        };
        num("L", &ScenarioConfig::L);
        num("d1", &ScenarioConfig::d1);
        num("d2", &ScenarioConfig::d2);
        num("s1", &ScenarioConfig::s1);
        num("s2", &ScenarioConfig::s2);
        num("c12", &ScenarioConfig::c12);
        num("c21", &ScenarioConfig::c21);
        num("a1", &ScenarioConfig::a1);
        num("b1", &ScenarioConfig::b1);
        num("c1", &ScenarioConfig::c1);
        num("a2", &ScenarioConfig::a2);
        num("b2", &ScenarioConfig::b2);
        num("c2", &ScenarioConfig::c2);
        num("neumann_a", &ScenarioConfig::neumann_a);
        num("T", &ScenarioConfig::T);
        num("tau", &ScenarioConfig::tau);
        num("tau_init", &ScenarioConfig::tau_init);
        num("tau_min", &ScenarioConfig::tau_min);
        num("tau_max", &ScenarioConfig::tau_max);
        num("safety", &ScenarioConfig::safety);
        num("u0", &ScenarioConfig::u0);
        num("v0", &ScenarioConfig::v0);
        num("perturbation", &ScenarioConfig::perturbation);
        num("timing_tau", &ScenarioConfig::timing_tau);

        t["N"] = [](ScenarioConfig& c, const Entry& e) { c.N = parse_int(e); };
        t["levels"] = [](ScenarioConfig& c, const Entry& e) { c.levels = parse_int(e); };
        t["record_every"] = [](ScenarioConfig& c, const Entry& e) { c.record_every = parse_int(e); };
        t["timing_steps"] = [](ScenarioConfig& c, const Entry& e) { c.timing_steps = parse_int(e); };
        t["timing_sizes"] = [](ScenarioConfig& c, const Entry& e) { c.timing_sizes = parse_int_list(e); };
        t["rng_seed"] = [](ScenarioConfig& c, const Entry& e) {
            const long long v = parse_integer(e);
            if (v < 0) bad_value(e, "a nonnegative integer");
            c.rng_seed = static_cast<std::uint64_t>(v);
        };
        t["fixed_tau"] = [](ScenarioConfig& c, const Entry& e) { c.fixed_tau = parse_bool(e); };
        t["freq_n"] = [](ScenarioConfig& c, const Entry& e) { c.freq_n = parse_triple(e); };
        t["freq_m"] = [](ScenarioConfig& c, const Entry& e) { c.freq_m = parse_triple(e); };
        t["freq_a"] = [](ScenarioConfig& c, const Entry& e) { c.freq_a = parse_triple(e); };
        t["freq_b"] = [](ScenarioConfig& c, const Entry& e) { c.freq_b = parse_triple(e); };
        t["output_dir"] = [](ScenarioConfig& c, const Entry& e) { c.output_dir = e.value; };
        t["bc"] = [](ScenarioConfig& c, const Entry& e) {
            c.bc = parse_enum<BoundaryKind>(
                e, {{"neumann", BoundaryKind::HomogeneousNeumann}, {"dirichlet", BoundaryKind::HomogeneousDirichlet}});
        };
        t["forcing"] = [](ScenarioConfig& c, const Entry& e) {
            c.forcing =
                parse_enum<ForcingKind>(e, {{"discrete", ForcingKind::Discrete}, {"continuous", ForcingKind::Continuous}});
        };
        t["reaction"] = [](ScenarioConfig& c, const Entry& e) {
            c.reaction = parse_enum<CustomReaction>(e, {{"zero", CustomReaction::Zero},
                                                        {"lotka_volterra", CustomReaction::LotkaVolterra},
                                                        {"logistic", CustomReaction::Logistic}});
        };
        t["predictor"] = [](ScenarioConfig& c, const Entry& e) {
            c.predictor = parse_enum<Predictor>(
                e, {{"frozen_sweep", Predictor::FrozenSweep}, {"explicit_euler", Predictor::ExplicitEuler}});
        };
        return t;
    }();
    return table;
}

void apply_reference_scale(ScenarioConfig& c) {
    if (c.scenario != ScenarioKind::Example1Dirichlet && c.scenario != ScenarioKind::Example1Neumann) {
        throw InvalidArgument("reference_scale applies only to example1 scenarios");
    }
    c.N = 99;  // delta = 0.01
    c.T = 1.0;
    c.tau = 2.5e-5;
}

}  // namespace

// ---------------------------------------------------------------- config

GridSpec ScenarioConfig::grid() const { return GridSpec(L, N, bc); }

ModelParams ScenarioConfig::params() const {
    ModelParams p{d1, d2, s1, s2, c12, c21, {}};
    const double h = forcing == ForcingKind::Discrete ? L / (N + 1) : 0.0;
    switch (scenario) {
        case ScenarioKind::Example1Dirichlet:
            p.reaction = ReactionSpec(ManufacturedDirichlet{h});
            break;
        case ScenarioKind::Example1Neumann:
            p.reaction = ReactionSpec(ManufacturedNeumann{neumann_a, h});
            break;
        case ScenarioKind::Example2:
            p.reaction = ReactionSpec(LotkaVolterra{a1, b1, c1, a2, b2, c2});
            break;
        case ScenarioKind::Example3:
            p.reaction = ReactionSpec(LogisticBlowup{a1, b1, a2, b2});
            break;
        case ScenarioKind::Custom:
            switch (reaction) {
                case CustomReaction::Zero:
                    break;
                case CustomReaction::LotkaVolterra:
                    p.reaction = ReactionSpec(LotkaVolterra{a1, b1, c1, a2, b2, c2});
                    break;
                case CustomReaction::Logistic:
                    p.reaction = ReactionSpec(LogisticBlowup{a1, b1, a2, b2});
                    break;
            }
            break;
    }
    return p;
}

StepControllerConfig ScenarioConfig::controller(double step) const {
    StepControllerConfig c;
    c.safety = safety;
    c.tau_init = tau_init;
    c.tau_min = tau_min;
    c.tau_max = tau_max;
    c.final_time = T;
    if (fixed_tau) c.fixed_tau = step;
    c.scheme.predictor = predictor;
    return c;
}

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& why) {
        throw InvalidArgument("invalid '" + key + "': " + why);
    };
    auto check = [&fail](auto&& fn, const char* key) {
        try {
            fn();
        } catch (const Error& e) {
            fail(key, e.what());
        }
    };
    if (!(L > 0.0)) fail("L", "must be > 0");
    if (N < 1) fail("N", "must be >= 1");
    check([this] { params().validate(); }, "model");
    if (!(T >= 0.0)) fail("T", "must be >= 0");
    if (!(tau > 0.0)) fail("tau", "must be > 0");
    check([this] { controller(tau).validate(); }, "controller");
    if (levels < 2) fail("levels", "must be >= 2");
    if (record_every < 1) fail("record_every", "must be >= 1");
    if (perturbation < 0.0) fail("perturbation", "must be >= 0");
    if (u0 < 0.0) fail("u0", "must be >= 0");
    if (v0 < 0.0) fail("v0", "must be >= 0");
    for (const auto* f : {&freq_n, &freq_m, &freq_a, &freq_b}) {
        for (int k : *f) {
            if (k < 1) fail("freq", "frequencies must be positive integers");
        }
    }
    if (timing_sizes.empty()) fail("timing_sizes", "must not be empty");
    for (int n : timing_sizes) {
        if (n < 3) fail("timing_sizes", "node counts must be >= 3");
    }
    if (timing_steps < 1) fail("timing_steps", "must be >= 1");
    if (!(timing_tau > 0.0)) fail("timing_tau", "must be > 0");
}

ScenarioConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
    const std::vector<Entry> entries = tokenize(text, overrides);

    const Entry* scenario = nullptr;
    for (const Entry& e : entries) {
        if (e.key == "scenario") scenario = &e;  // last one wins
    }
    if (!scenario) throw InvalidArgument("scenario required");

    ScenarioConfig cfg = defaults_for(parse_kind(*scenario));
    for (const Entry& e : entries) {
        if (e.key == "reference_scale" && parse_bool(e)) apply_reference_scale(cfg);
    }
    for (const Entry& e : entries) {
        if (e.key == "scenario") continue;
        if (e.key == "reference_scale") {
            cfg.reference_scale = parse_bool(e);
            continue;
        }
        const auto it = setters().find(e.key);
        if (it == setters().end()) throw InvalidArgument(e.origin + ": unknown key '" + e.key + "'");
        it->second(cfg, e);
    }
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------- initial data

FieldPair initial_fields(const ScenarioConfig& cfg) {
    const GridSpec grid = cfg.grid();
    const int m = grid.node_count();
    const bool dirichlet = grid.bc() == BoundaryKind::HomogeneousDirichlet;
    FieldPair f{Lattice(grid), Lattice(grid)};

    switch (cfg.scenario) {
        case ScenarioKind::Example1Dirichlet:
            return sample_exact(grid, exact_dirichlet, 0.0);
        case ScenarioKind::Example1Neumann: {
            const double a = cfg.neumann_a;
            return sample_exact(grid, [a](double x, double y, double t) { return exact_neumann(a, x, y, t); }, 0.0);
        }
        case ScenarioKind::Example2: {
            std::mt19937_64 rng(cfg.rng_seed);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            std::array<double, 3> sigma{}, beta{};
            for (double& s : sigma) s = unit(rng);
            for (double& b : beta) b = unit(rng);
            for (int j = 0; j < m; ++j) {
                for (int i = 0; i < m; ++i) {
                    const double x = grid.coord(i), y = grid.coord(j);
                    double u = 2.0, v = 2.0;
                    for (int k = 0; k < 3; ++k) {
                        u += sigma[k] * std::cos(cfg.freq_n[k] * x) * std::cos(cfg.freq_m[k] * y);
                        v += beta[k] * std::cos(cfg.freq_a[k] * x) * std::cos(cfg.freq_b[k] * y);
                    }
                    f.u(i, j) = u;
                    f.v(i, j) = v;
                }
            }
            break;
        }
        case ScenarioKind::Example3:
            for (int j = 0; j < m; ++j) {
                for (int i = 0; i < m; ++i) {
                    if (grid.is_boundary(i, j)) continue;
                    const double sx = std::sin(4.0 * grid.coord(i)), sy = std::sin(2.0 * grid.coord(j));
                    f.u(i, j) = f.v(i, j) = sx * sx * sy * sy;
                }
            }
            break;
        case ScenarioKind::Custom: {
            std::mt19937_64 rng(cfg.rng_seed);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            for (int j = 0; j < m; ++j) {
                for (int i = 0; i < m; ++i) {
                    const double du = cfg.perturbation * unit(rng);
                    const double dv = cfg.perturbation * unit(rng);
                    if (dirichlet && grid.is_boundary(i, j)) continue;
                    f.u(i, j) = cfg.u0 + du;
                    f.v(i, j) = cfg.v0 + dv;
                }
            }
            break;
        }
    }
    return f;
}

// ---------------------------------------------------------------- output

namespace {

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const char* header) : path_(path), out_(path) {
        if (!out_) throw Error("cannot open " + path.string() + " for writing");
        out_ << header << '\n';
    }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            if (!first) out_ << ',';
            out_ << buf;
            first = false;
        }
        out_ << '\n';
    }

    void close() {
        out_.close();
        if (!out_) throw Error("write failed for " + path_.string());
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

std::filesystem::path prepare_output(const ScenarioConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw Error("cannot create " + cfg.output_dir.string() + ": " + ec.message());
    return cfg.output_dir;
}

void absorb(ScenarioResult& result, const AdvanceResult& run) {
    result.status = run.state.status;
    result.final_time = run.state.time;
    result.final_tau = run.report.final_candidate_tau;
    result.max_field = run.report.max_field;
    result.dudt = run.report.dudt_estimate;
    result.steps += run.report.accepted_steps;
    result.cfl_violations += run.report.cfl_violations;
    result.negative_steps += run.report.negative_steps;
    const FieldPair& f = run.state.fields;
    result.spread_u = f.u.max() - f.u.min();
    result.spread_v = f.v.max() - f.v.min();
    auto mean = [](const Lattice& l) {
        double s = 0.0;
        for (double x : l.values()) s += x;
        return s / static_cast<double>(l.size());
    };
    result.mean_u = mean(f.u);
    result.mean_v = mean(f.v);
    result.final_fields = f;
}

ScenarioResult run_example1(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const GridSpec grid = cfg.grid();
    const ModelParams params = cfg.params();
    const double a = cfg.neumann_a;
    const ExactSolution exact = cfg.scenario == ScenarioKind::Example1Dirichlet
                                    ? ExactSolution(exact_dirichlet)
                                    : ExactSolution([a](double x, double y, double t) { return exact_neumann(a, x, y, t); });

    ScenarioResult result;
    CsvFile errors(dir / "errors.csv", "tau,delta,max_err_u,max_err_v");
    CsvFile orders(dir / "order.csv", "p");
    FieldPair previous;
    double tau = cfg.tau;
    for (int level = 0; level < cfg.levels; ++level, tau *= 0.5) {
        SolverState start;
        start.fields = initial_fields(cfg);
        const AdvanceResult run = advance_to_time(std::move(start), grid, params, cfg.controller(tau));
        absorb(result, run);
        FieldPair err = abs_error_fields(run.state.fields, exact, grid, run.state.time);
        const ErrorRow row{tau, grid.spacing(), err.u.max(), err.v.max()};
        result.errors.push_back(row);
        errors.row({row.tau, row.delta, row.max_err_u, row.max_err_v});
        if (level > 0) {
            const double p = estimate_order(grid, previous, err);
            result.orders.push_back(p);
            orders.row({p});
        }
        previous = std::move(err);
    }
    errors.close();
    orders.close();
    write_snapshot(dir / "snapshot.csv", grid, result.final_fields);
    result.artifacts = {dir / "errors.csv", dir / "order.csv", dir / "snapshot.csv"};
    return result;
}

ScenarioResult run_example2(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    const GridSpec grid = cfg.grid();
    ScenarioResult result;
    CsvFile csv(dir / "homogeneity.csv", "t,spread_u,spread_v");
    auto record = [&csv](double t, const FieldPair& f) { csv.row({t, f.u.max() - f.u.min(), f.v.max() - f.v.min()}); };

    SolverState start;
    start.fields = initial_fields(cfg);
    record(0.0, start.fields);
    std::int64_t last_recorded = 0;
    const AdvanceResult run = advance_to_time(
        std::move(start), grid, cfg.params(), cfg.controller(cfg.tau),
        [&](std::int64_t k, double t, const FieldPair& f) {
            if (k % cfg.record_every == 0) {
                record(t, f);
                last_recorded = k;
            }
        });
    if (run.state.step_index != last_recorded) record(run.state.time, run.state.fields);
    csv.close();
    absorb(result, run);
    write_snapshot(dir / "snapshot.csv", grid, run.state.fields);
    result.artifacts = {dir / "homogeneity.csv", dir / "snapshot.csv"};
    return result;
}

// Example 3 and Custom: step trace (t, tau, max_u, max_v) plus final snapshot.
ScenarioResult run_traced(const ScenarioConfig& cfg, const std::filesystem::path& dir, const char* name) {
    const GridSpec grid = cfg.grid();
    ScenarioResult result;
    CsvFile csv(dir / name, "t,tau,max_u,max_v");
    SolverState start;
    start.fields = initial_fields(cfg);
    std::int64_t last_recorded = 0;
    StepRecord last{};
    const AdvanceResult run = advance_to_time(std::move(start), grid, cfg.params(), cfg.controller(cfg.tau), {},
                                              [&](const StepRecord& r) {
                                                  last = r;
                                                  if (r.step_index % cfg.record_every == 0) {
                                                      csv.row({r.time, r.tau, r.max_u, r.max_v});
                                                      last_recorded = r.step_index;
                                                  }
                                              });
    if (run.state.step_index > 0 && run.state.step_index != last_recorded) {
        csv.row({last.time, last.tau, last.max_u, last.max_v});
    }
    csv.close();
    absorb(result, run);
    write_snapshot(dir / "snapshot.csv", grid, run.state.fields);
    result.artifacts = {dir / name, dir / "snapshot.csv"};
    return result;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const std::filesystem::path dir = prepare_output(cfg);
    switch (cfg.scenario) {
        case ScenarioKind::Example1Dirichlet:
        case ScenarioKind::Example1Neumann:
            return run_example1(cfg, dir);
        case ScenarioKind::Example2:
            return run_example2(cfg, dir);
        case ScenarioKind::Example3:
            return run_traced(cfg, dir, "blowup.csv");
        case ScenarioKind::Custom:
            return run_traced(cfg, dir, "trace.csv");
    }
    throw InvalidArgument("run_scenario: unknown scenario");
}

// ---------------------------------------------------------------- timing

double fit_loglog_slope(const std::vector<TimingRow>& rows) {
    double sx = 0.0, sy = 0.0;
    for (const TimingRow& r : rows) {
        sx += std::log(r.nodes);
        sy += std::log(r.seconds);
    }
    const double n = static_cast<double>(rows.size());
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const TimingRow& r : rows) {
        const double dx = std::log(r.nodes) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(r.seconds) - my);
    }
    if (rows.size() < 2 || !(sxx > 0.0)) {
        throw Indeterminate("fit_loglog_slope: need at least two distinct sizes");
    }
    return sxy / sxx;
}

TimingResult run_timing_study(const ScenarioConfig& cfg) {
    cfg.validate();
    const std::filesystem::path dir = prepare_output(cfg);
    TimingResult result;
    for (int nodes : cfg.timing_sizes) {
        ScenarioConfig sized = cfg;
        sized.N = nodes - 2;  // delta = L / (nodes - 1)
        const GridSpec grid = sized.grid();
        const ModelParams params = sized.params();
        const SchemeOptions options{sized.predictor};
        SolverState state;
        state.fields = initial_fields(sized);
        if (!invertibility_guard(grid, params, state.fields, cfg.timing_tau)) {
            throw InvalidArgument("timing_tau violates the invertibility bound at " + std::to_string(nodes) +
                                  " nodes");
        }

        const auto t0 = std::chrono::steady_clock::now();
        for (int k = 0; k < cfg.timing_steps; ++k) {
            state.fields = scheme_step(state, grid, params, cfg.timing_tau, options);
            state.time += cfg.timing_tau;
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.rows.push_back({nodes, seconds});
    }

    CsvFile csv(dir / "timing.csv", "N,seconds");
    for (const TimingRow& r : result.rows) csv.row({static_cast<double>(r.nodes), r.seconds});
    csv.close();
    result.artifacts = {dir / "timing.csv"};
    try {
        result.slope = fit_loglog_slope(result.rows);
    } catch (const Indeterminate&) {
        result.slope.reset();
    }
    return result;
}

// ---------------------------------------------------------------- snapshots

void write_snapshot(const std::filesystem::path& path, const GridSpec& grid, const FieldPair& fields) {
    validate_fields(grid, fields);
    CsvFile csv(path, "x,y,u,v");
    const int m = grid.node_count();
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) csv.row({grid.coord(i), grid.coord(j), fields.u(i, j), fields.v(i, j)});
    }
    csv.close();
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != "x,y,u,v") {
        throw Error(path.string() + ": missing header x,y,u,v");
    }
    std::vector<double> x, y, u, v;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::array<double, 4> cols{};
        std::size_t pos = 0;
        for (int c = 0; c < 4; ++c) {
            const auto end = c < 3 ? line.find(',', pos) : line.size();
            if (end == std::string::npos) throw Error(path.string() + ": line " + std::to_string(line_no) + ": expected 4 columns");
            const Entry cell{"column", trim(std::string_view(line).substr(pos, end - pos)), "line " + std::to_string(line_no)};
            try {
                cols[c] = parse_double(cell);
            } catch (const InvalidArgument& e) {
                throw Error(path.string() + ": " + e.what());
            }
            pos = end + 1;
        }
        x.push_back(cols[0]);
        y.push_back(cols[1]);
        u.push_back(cols[2]);
        v.push_back(cols[3]);
    }
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(u.size()))));
    if (side < 1 || static_cast<std::size_t>(side) * side != u.size()) {
        throw Error(path.string() + ": row count " + std::to_string(u.size()) + " is not a perfect square");
    }
    Snapshot s;
    s.side = side;
    s.x = std::move(x);
    s.y = std::move(y);
    s.fields = FieldPair{Lattice(side, std::move(u)), Lattice(side, std::move(v))};
    return s;
}

}  // namespace skt
