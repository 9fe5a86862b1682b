// Command-line front end for the scenario runner.
//
//   skt_cli run         --config cfg.txt [--key=value ...] [--threads N]
//   skt_cli convergence --config cfg.txt ...
//   skt_cli timing      --config cfg.txt ...
//   skt_cli blowup      --config cfg.txt ...
//
// Overrides use the config-file keys. Exit codes: 0 success, 1 error,
// 2 bad usage or config, 3 blowup requested but not detected.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skt/parallel.hpp"
#include "skt/scenario.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoBlowup = 3;

struct Invocation {
    std::string config_path;
    int threads = 1;
    std::vector<std::string> extras;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw skt::Error("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

skt::ScenarioConfig load(const Invocation& inv) {
    std::vector<std::string> overrides;
    for (const std::string& arg : inv.extras) {
        if (arg.rfind("--", 0) != 0 || arg.find('=') == std::string::npos) {
            throw skt::InvalidArgument("unexpected argument '" + arg + "' (overrides look like --key=value)");
        }
        overrides.push_back(arg.substr(2));
    }
    const std::string text = inv.config_path.empty() ? std::string() : read_file(inv.config_path);
    return skt::parse_config(text, overrides);
}

void print_artifacts(const std::vector<std::filesystem::path>& paths) {
    for (const auto& p : paths) std::printf("wrote %s\n", p.string().c_str());
}

void print_run(const skt::ScenarioResult& r) {
    std::printf("status=%s t=%.10g steps=%lld max_field=%.10g last_tau=%.6g cfl_violations=%lld\n",
                skt::to_string(r.status), r.final_time, static_cast<long long>(r.steps), r.max_field, r.final_tau,
                static_cast<long long>(r.cfl_violations));
}

int cmd_run(const skt::ScenarioConfig& cfg) {
    const skt::ScenarioResult r = skt::run_scenario(cfg);
    print_run(r);
    for (const auto& e : r.errors) {
        std::printf("tau=%.6g delta=%.6g max_err_u=%.6e max_err_v=%.6e\n", e.tau, e.delta, e.max_err_u, e.max_err_v);
    }
    for (double p : r.orders) std::printf("p=%.6f\n", p);
    if (cfg.scenario == skt::ScenarioKind::Example2) {
        std::printf("spread_u=%.6e spread_v=%.6e mean_u=%.6f mean_v=%.6f\n", r.spread_u, r.spread_v, r.mean_u,
                    r.mean_v);
    }
    print_artifacts(r.artifacts);
    return 0;
}

int cmd_convergence(const skt::ScenarioConfig& cfg) {
    if (cfg.scenario != skt::ScenarioKind::Example1Dirichlet && cfg.scenario != skt::ScenarioKind::Example1Neumann) {
        throw skt::InvalidArgument("convergence needs scenario=example1_dirichlet or example1_neumann");
    }
    return cmd_run(cfg);
}

int cmd_timing(const skt::ScenarioConfig& cfg) {
    const skt::TimingResult r = skt::run_timing_study(cfg);
    for (const auto& row : r.rows) std::printf("N=%d seconds=%.6f\n", row.nodes, row.seconds);
    if (r.slope) {
        std::printf("slope=%.6f\n", *r.slope);
    } else {
        std::printf("slope=indeterminate\n");
    }
    print_artifacts(r.artifacts);
    return 0;
}

int cmd_blowup(const skt::ScenarioConfig& cfg) {
    const skt::ScenarioResult r = skt::run_scenario(cfg);
    print_run(r);
    std::printf("dudt=%.6e\n", r.dudt);
    print_artifacts(r.artifacts);
    return r.status == skt::RunStatus::BlowupDetected ? 0 : kExitNoBlowup;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operator-splitting solver for two-species self- and cross-diffusion systems"};
    app.require_subcommand(1);

    struct Command {
        const char* name;
        const char* help;
        int (*fn)(const skt::ScenarioConfig&);
    };
    const Command commands[] = {
        {"run", "Run the configured scenario", cmd_run},
        {"convergence", "Temporal convergence study (example1 scenarios)", cmd_convergence},
        {"timing", "Wall time of fixed steps over timing_sizes", cmd_timing},
        {"blowup", "Run until the admissible step collapses", cmd_blowup},
    };

    Invocation inv;
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", inv.config_path, "key=value config file");
        sub->add_option("--threads", inv.threads, "worker threads for line sweeps (1 is bitwise deterministic)")
            ->check(CLI::PositiveNumber);
        sub->allow_extras();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    for (const Command& c : commands) {
        CLI::App* sub = app.get_subcommand(c.name);
        if (!sub->parsed()) continue;
        inv.extras = sub->remaining();
        try {
            skt::set_thread_count(inv.threads);
            const skt::ScenarioConfig cfg = load(inv);
            return c.fn(cfg);
        } catch (const skt::InvalidArgument& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return kExitUsage;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return kExitError;
        }
    }
    return kExitUsage;
}
