// rensim: scenario-driven front end for the renewal epidemic model library.
// Exit codes: 0 success, 1 certification failure, 2 input error, 3 numerical
// failure.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "renewal/commands.hpp"
#include "renewal/errors.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    double dt = 0.0;
    double t_end = 0.0;
    bool has_dt = false;
    bool has_t_end = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool out_required) {
    cmd->add_option("--config", args.config, "scenario config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    auto* out = cmd->add_option("--out", args.out, "output directory");
    if (out_required) out->required();
    cmd->add_option("--dt", args.dt, "override the grid step")
        ->each([&args](const std::string&) { args.has_dt = true; });
    cmd->add_option("--t-end", args.t_end, "override the simulated horizon")
        ->each([&args](const std::string&) { args.has_t_end = true; });
}

renewal::Scenario load(const CommonArgs& args) {
    renewal::Overrides o;
    if (args.has_dt) o.dt = args.dt;
    if (args.has_t_end) o.t_end = args.t_end;
    return renewal::apply_overrides(renewal::load_scenario(args.config), o);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"renewal epidemic model: equilibria, trajectories and Lyapunov certificates"};
    app.require_subcommand(1);

    CommonArgs eq_args, run_args, cert_args, sweep_args;
    int workers = 1;

    CLI::App* eq = app.add_subcommand("equilibrium", "equilibria and R0, no simulation");
    add_common(eq, eq_args, false);

    CLI::App* run = app.add_subcommand("run", "simulate and write trajectory + summary");
    add_common(run, run_args, true);

    CLI::App* cert =
        app.add_subcommand("certify", "run with Lyapunov monitors and applicable oracles");
    add_common(cert, cert_args, false);

    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    add_common(sweep, sweep_args, true);
    sweep->add_option("--workers", workers, "concurrent sweep points")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (eq->parsed()) {
            const auto summary = renewal::cmd_equilibrium(load(eq_args));
            if (!eq_args.out.empty()) {
                std::filesystem::create_directories(eq_args.out);
                renewal::write_summary_json(summary,
                                            std::filesystem::path(eq_args.out) / "summary.json");
            }
            std::cout << renewal::summary_to_json(summary).dump(2) << "\n";
        } else if (run->parsed()) {
            const auto out = renewal::cmd_run(load(run_args));
            const std::filesystem::path dir(run_args.out);
            std::filesystem::create_directories(dir);
            renewal::write_trajectory_csv(out.trajectory, dir / "trajectory.csv");
            renewal::write_summary_json(out.summary, dir / "summary.json");
            const auto& v = *out.summary.convergence;
            std::cout << "converged_to: " << v.converged_to << " (F_end " << v.F_end
                      << ", S rel dev " << v.S_rel_dev_P0 << ")\n";
        } else if (cert->parsed()) {
            const auto out = renewal::cmd_certify(load(cert_args));
            if (!cert_args.out.empty()) {
                std::filesystem::create_directories(cert_args.out);
                renewal::write_summary_json(out.summary,
                                            std::filesystem::path(cert_args.out) /
                                                "summary.json");
            }
            std::cout << renewal::summary_to_json(out.summary).dump(2) << "\n";
            std::cout << (out.pass ? "CERTIFY PASS" : "CERTIFY FAIL") << "\n";
            if (!out.pass) return 1;
        } else if (sweep->parsed()) {
            const auto out = renewal::cmd_sweep(load(sweep_args), workers);
            renewal::write_sweep_outputs(out, sweep_args.out);
            std::size_t failed = 0;
            for (const auto& p : out.points) failed += p.summary ? 0 : 1;
            std::cout << out.points.size() << " sweep points, " << failed << " failed\n";
        }
    } catch (const renewal::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const renewal::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
