#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "skt/parallel.hpp"
#include "skt/scenario.hpp"
#include "support.hpp"

using namespace skt;
using namespace skt::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "skt_unit" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        REQUIRE(ec == std::errc());
        REQUIRE(ptr == cell.data() + cell.size());
        out.push_back(v);
    }
    return out;
}

std::string error_of(std::string_view text, const std::vector<std::string>& overrides = {}) {
    try {
        parse_config(text, overrides);
    } catch (const InvalidArgument& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("parse_config defaults per scenario") {
    const ScenarioConfig c = parse_config("scenario=example3");
    CHECK(c.scenario == ScenarioKind::Example3);
    CHECK(c.L == std::numbers::pi);
    CHECK(c.bc == BoundaryKind::HomogeneousDirichlet);
    CHECK(c.d1 == 1.0);
    CHECK(c.d2 == 1.0);
    CHECK(c.s1 == 0.05);
    CHECK(c.s2 == 0.05);
    CHECK(c.c12 == 0.0);
    CHECK(c.c21 == 0.0);
    CHECK(c.a1 == 3.0);
    CHECK(c.a2 == 3.0);
    CHECK(c.b1 == 4.0);
    CHECK(c.b2 == 4.0);
    CHECK(c.tau_min == 1e-10);
    CHECK_FALSE(c.fixed_tau);
    CHECK(std::holds_alternative<LogisticBlowup>(c.params().reaction.kind()));

    const ScenarioConfig e2 = parse_config("scenario=example2");
    CHECK(e2.d1 == 0.01);
    CHECK(e2.d2 == 0.1);
    CHECK(e2.s1 == 0.05);
    CHECK(e2.s2 == 0.4);
    CHECK(e2.c12 == 0.12);
    CHECK(e2.c21 == 0.06);
    CHECK(e2.grid().spacing() == doctest::Approx(std::numbers::pi / 64.0).epsilon(1e-15));
    CHECK(e2.freq_n == std::array<int, 3>{1, 2, 3});
    CHECK(e2.freq_b == std::array<int, 3>{2, 2, 1});

    const ScenarioConfig e1 = parse_config("scenario=example1_dirichlet");
    CHECK(e1.grid().spacing() == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(e1.T == 0.1);
    CHECK(e1.tau == 1e-4);
    CHECK(e1.fixed_tau);

    const ScenarioConfig ref = parse_config("scenario=example1_dirichlet\nreference_scale=true");
    CHECK(ref.grid().spacing() == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(ref.T == 1.0);
    CHECK(ref.tau == 2.5e-5);
}

TEST_CASE("parse_config errors") {
    CHECK(error_of("") == "scenario required");
    CHECK(error_of("# only a comment\n\n") == "scenario required");
    CHECK(error_of("scenario=example2\nd1=-1").find("d1") != std::string::npos);
    CHECK(error_of("scenario=example2\n\nbogus=3").find("line 3") != std::string::npos);
    CHECK(error_of("scenario=example2\n\nbogus=3").find("bogus") != std::string::npos);
    CHECK(error_of("scenario=example2\nN=abc").find("line 2") != std::string::npos);
    CHECK(error_of("scenario=example2\njust text").find("line 2") != std::string::npos);
    CHECK(error_of("scenario=nothing").find("scenario") != std::string::npos);
    CHECK(error_of("scenario=example2\nfreq_n=1,2").find("freq_n") != std::string::npos);
    CHECK(error_of("scenario=example2\nfreq_n=1,0,2").find("freq") != std::string::npos);
    CHECK(error_of("scenario=example2", {"tau_min=-1"}).find("tau_min") != std::string::npos);
    CHECK(error_of("scenario=example2", {"T"}).find("override") != std::string::npos);
    CHECK(error_of("scenario=example2\nreference_scale=true").find("reference_scale") != std::string::npos);
}

TEST_CASE("parse_config comments, whitespace and overrides") {
    const ScenarioConfig c = parse_config(
        "# header\n  scenario = custom   # trailing\nbc=dirichlet\nreaction=logistic\na1=2\nN=7\nrng_seed=5\n",
        {"N=9", "T=0.25"});
    CHECK(c.scenario == ScenarioKind::Custom);
    CHECK(c.bc == BoundaryKind::HomogeneousDirichlet);
    CHECK(c.N == 9);
    CHECK(c.T == 0.25);
    CHECK(c.a1 == 2.0);
    CHECK(c.rng_seed == 5);
    CHECK(std::holds_alternative<LogisticBlowup>(c.params().reaction.kind()));
}

TEST_CASE("initial fields") {
    SUBCASE("example 2 is seeded and reproducible") {
        ScenarioConfig c = parse_config("scenario=example2\nN=15");
        const FieldPair a = initial_fields(c), b = initial_fields(c);
        CHECK(a == b);
        c.rng_seed = 2;
        CHECK_FALSE(initial_fields(c) == a);
        // 2 + sum of three cosine products with amplitudes in (0, 1)
        CHECK(a.min_value() > -1.0);
        CHECK(a.max_value() < 5.0);
        CHECK(a.u(0, 0) > 2.0);
    }
    SUBCASE("example 3 vanishes on the boundary") {
        const ScenarioConfig c = parse_config("scenario=example3\nN=15");
        const FieldPair f = initial_fields(c);
        CHECK_NOTHROW(validate_fields(c.grid(), f));
        CHECK(f.u == f.v);
        CHECK(f.max_value() <= 1.0);
    }
    SUBCASE("custom Dirichlet data respects the boundary") {
        const ScenarioConfig c = parse_config("scenario=custom\nbc=dirichlet\nperturbation=0.1\nN=5");
        CHECK_NOTHROW(validate_fields(c.grid(), initial_fields(c)));
    }
}

TEST_CASE("snapshots") {
    const fs::path dir = scratch("snapshots");
    SUBCASE("zero fields on M = 3") {
        const GridSpec g(1.0, 1, BoundaryKind::HomogeneousNeumann);
        write_snapshot(dir / "zero.csv", g, {Lattice(g), Lattice(g)});
        const auto lines = read_lines(dir / "zero.csv");
        REQUIRE(lines.size() == 10);
        CHECK(lines[0] == "x,y,u,v");
        for (std::size_t k = 1; k < lines.size(); ++k) {
            const auto row = parse_row(lines[k]);
            CHECK(row[2] == 0.0);
            CHECK(row[3] == 0.0);
        }
        // x runs fastest
        CHECK(parse_row(lines[2])[0] == 0.5);
        CHECK(parse_row(lines[2])[1] == 0.0);
    }
    SUBCASE("round trip is bitwise") {
        std::mt19937_64 rng(8);
        const GridSpec g(std::numbers::pi, 6, BoundaryKind::HomogeneousNeumann);
        FieldPair f = random_fields(g, rng, -1e-300, 1e300);
        f.u(1, 1) = 1.0 / 3.0;
        f.v(2, 5) = -0.0;
        f.v(3, 3) = 4.9406564584124654e-324;
        write_snapshot(dir / "rt.csv", g, f);
        const Snapshot s = read_snapshot(dir / "rt.csv");
        CHECK(s.side == 8);
        CHECK(s.fields == f);
        CHECK(s.x[3] == g.coord(3));
        CHECK(s.y[8 * 5] == g.coord(5));
    }
    SUBCASE("I/O errors name the path") {
        const GridSpec g(1.0, 1, BoundaryKind::HomogeneousNeumann);
        const fs::path bad = dir / "missing_dir" / "x.csv";
        try {
            write_snapshot(bad, g, {Lattice(g), Lattice(g)});
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("missing_dir") != std::string::npos);
        }
        CHECK_THROWS_AS(read_snapshot(bad), Error);
        std::ofstream(dir / "bad.csv") << "x,y,u,v\n1,2,3\n";
        CHECK_THROWS_AS(read_snapshot(dir / "bad.csv"), Error);
    }
}

TEST_CASE("run_scenario artifacts") {
    SUBCASE("example 1 writes errors and orders") {
        const fs::path dir = scratch("ex1");
        const ScenarioConfig c = parse_config("scenario=example1_neumann\nN=19\nT=0.02\ntau=2.5e-4\nlevels=3",
                                              {"output_dir=" + dir.string()});
        const ScenarioResult r = run_scenario(c);
        REQUIRE(r.errors.size() == 3);
        REQUIRE(r.orders.size() == 2);
        CHECK(r.cfl_violations == 0);
        CHECK(r.errors[1].tau == 1.25e-4);
        for (double p : r.orders) CHECK(p == doctest::Approx(2.0).epsilon(0.05));

        const auto errors = read_lines(dir / "errors.csv");
        REQUIRE(errors.size() == 4);
        CHECK(errors[0] == "tau,delta,max_err_u,max_err_v");
        const auto row = parse_row(errors[2]);
        CHECK(row[0] == r.errors[1].tau);
        CHECK(row[1] == r.errors[1].delta);
        CHECK(row[2] == r.errors[1].max_err_u);
        CHECK(row[3] == r.errors[1].max_err_v);
        const auto orders = read_lines(dir / "order.csv");
        REQUIRE(orders.size() == 3);
        CHECK(orders[0] == "p");
        CHECK(parse_row(orders[2])[0] == r.orders[1]);
        CHECK(fs::exists(dir / "snapshot.csv"));
    }
    SUBCASE("example 2 writes the spread history") {
        const fs::path dir = scratch("ex2");
        const ScenarioConfig c = parse_config("scenario=example2\nN=15\nT=1\nrecord_every=7",
                                              {"output_dir=" + dir.string()});
        const ScenarioResult r = run_scenario(c);
        const auto lines = read_lines(dir / "homogeneity.csv");
        CHECK(lines[0] == "t,spread_u,spread_v");
        const auto first = parse_row(lines[1]);
        const auto last = parse_row(lines.back());
        CHECK(first[0] == 0.0);
        CHECK(last[0] == r.final_time);
        CHECK(last[1] == r.spread_u);
        CHECK(last[2] == r.spread_v);
        CHECK(r.status == RunStatus::ReachedFinalTime);
    }
    SUBCASE("example 3 snapshot matches the last blow-up row") {
        const fs::path dir = scratch("ex3");
        const ScenarioConfig c = parse_config("scenario=example3\nN=15", {"output_dir=" + dir.string()});
        const ScenarioResult r = run_scenario(c);
        CHECK(r.status == RunStatus::BlowupDetected);
        const auto lines = read_lines(dir / "blowup.csv");
        CHECK(lines[0] == "t,tau,max_u,max_v");
        CHECK(static_cast<std::int64_t>(lines.size()) == r.steps + 1);
        const auto last = parse_row(lines.back());
        const Snapshot s = read_snapshot(dir / "snapshot.csv");
        CHECK(s.fields.u.max() == last[2]);
        CHECK(s.fields.v.max() == last[3]);
        CHECK(last[0] == r.final_time);
    }
    SUBCASE("custom writes a trace") {
        const fs::path dir = scratch("custom");
        const ScenarioConfig c =
            parse_config("scenario=custom\nN=7\nT=0.05\nperturbation=0.5\nreaction=lotka_volterra\na1=1\nb1=1\na2=1\nc2=1",
                         {"output_dir=" + dir.string()});
        const ScenarioResult r = run_scenario(c);
        CHECK(r.status == RunStatus::ReachedFinalTime);
        CHECK(read_lines(dir / "trace.csv").size() == static_cast<std::size_t>(r.steps + 1));
    }
}

TEST_CASE("runs are reproducible and thread-count independent") {
    const auto run = [](int threads) {
        set_thread_count(threads);
        const ScenarioConfig c = parse_config("scenario=example2\nN=20\nT=0.5\nrng_seed=9",
                                              {"output_dir=" + scratch("repro" + std::to_string(threads)).string()});
        return run_scenario(c).final_fields;
    };
    const FieldPair one = run(1);
    CHECK(run(1) == one);
    CHECK(max_diff(run(3), one) <= 1e-12);
    set_thread_count(1);
}

TEST_CASE("timing study") {
    SUBCASE("slope fit") {
        std::vector<TimingRow> rows;
        for (int n : {10, 20, 40}) rows.push_back({n, 3e-6 * n * n});
        CHECK(fit_loglog_slope(rows) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK_THROWS_AS(fit_loglog_slope({{16, 1.0}}), Indeterminate);
        CHECK_THROWS_AS(fit_loglog_slope({{16, 1.0}, {16, 2.0}}), Indeterminate);
    }
    SUBCASE("a single size still writes timing.csv") {
        const fs::path dir = scratch("timing1");
        const ScenarioConfig c = parse_config("scenario=example1_dirichlet\ntiming_sizes=16\ntiming_steps=5",
                                              {"output_dir=" + dir.string()});
        const TimingResult r = run_timing_study(c);
        CHECK_FALSE(r.slope.has_value());
        const auto lines = read_lines(dir / "timing.csv");
        REQUIRE(lines.size() == 2);
        CHECK(lines[0] == "N,seconds");
        CHECK(parse_row(lines[1])[0] == 16.0);
    }
    SUBCASE("wall time is linear in the step count") {
        const fs::path dir = scratch("timing2");
        auto seconds = [&](int steps) {
            ScenarioConfig c = parse_config("scenario=example1_dirichlet\ntiming_sizes=96",
                                            {"output_dir=" + dir.string(), "timing_steps=" + std::to_string(steps)});
            double best = 1e300;  // best of three damps scheduler noise
            for (int k = 0; k < 3; ++k) best = std::min(best, run_timing_study(c).rows[0].seconds);
            return best;
        };
        const double ratio = seconds(200) / seconds(100);
        MESSAGE("200/100 step time ratio " << ratio);
        CHECK(ratio >= 1.5);
        CHECK(ratio <= 2.5);
    }
}
