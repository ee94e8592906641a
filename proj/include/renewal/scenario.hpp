#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "renewal/discretization.hpp"
#include "renewal/equilibria.hpp"
#include "renewal/history.hpp"
#include "renewal/lyapunov.hpp"
#include "renewal/types.hpp"
#include "renewal/verification.hpp"

namespace renewal {

struct RunConfig {
    double t_end = 0.0;
    bool record_U = true;
    bool record_W = true;
    bool monitor = true;

    bool operator==(const RunConfig&) const = default;
};

struct ToleranceConfig {
    double C_tol = 10.0;          // monitor violation scale, tol = C_tol * delta^2
    double solver_rel_tol = 1e-12;
    double identity_tol = 1e-9;
    double p0_F_tol = 1e-8;       // F(t_end) proximity for a P0 verdict
    double p0_S_rel_tol = 1e-6;   // relative S proximity for a P0 verdict
    double pbar_rel_tol = 1e-4;   // relative (S, F) proximity for a Pbar verdict

    bool operator==(const ToleranceConfig&) const = default;
};

struct SweepAxis {
    std::string path; // dotted scalar field path, e.g. "kernel.height"
    std::vector<double> values;

    bool operator==(const SweepAxis&) const = default;
};

struct SweepSpec {
    std::vector<SweepAxis> axes;

    bool operator==(const SweepSpec&) const = default;
};

struct Scenario {
    SigmaGrid sigma;
    ModelParams params;
    KernelFamily kernel;
    GridSpec grid;
    InitialCondition initial;
    RunConfig run;
    ToleranceConfig tolerances;
    std::optional<SweepSpec> sweep;

    bool operator==(const Scenario&) const = default;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& file);

struct ConvergenceVerdict {
    std::string converged_to; // "P0", "Pbar" or "none"
    double t_end = 0.0;
    double F_end = 0.0;
    double S_rel_dev_P0 = 0.0;                // max over classes
    std::optional<double> rel_dist_Pbar;      // max of F and S relative distances
};

struct SummaryReport {
    double R0 = 0.0;
    std::vector<double> S0;
    double eta0 = 0.0;
    std::optional<EndemicEquilibrium> endemic;
    std::optional<std::string> classification;
    std::optional<ConvergenceVerdict> convergence;
    std::optional<MonitorReport> monitor;
    std::vector<OracleReport> oracles;
};

nlohmann::json summary_to_json(const SummaryReport& s);

} // namespace renewal
