#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "renewal/scenario.hpp"
#include "renewal/simulator.hpp"

namespace renewal {

struct Overrides {
    std::optional<double> dt;
    std::optional<double> t_end;
};

Scenario apply_overrides(Scenario s, const Overrides& o);

/// Equilibrium analysis only: R0, infection-free state, endemic block when
/// R0 > 1, and the initial-condition classification.
SummaryReport cmd_equilibrium(const Scenario& s);

struct RunOutput {
    SummaryReport summary;
    TrajectoryRecord trajectory;
};

/// Full simulation with the observers requested by the scenario. W columns
/// are recorded only where W is defined (endemic exists, interior start).
RunOutput cmd_run(const Scenario& s);

struct CertifyOutput {
    SummaryReport summary;
    bool pass = false;
};

/// Simulation with both Lyapunov monitors forced on plus every oracle that
/// applies to the scenario shape.
CertifyOutput cmd_certify(const Scenario& s);

struct SweepPoint {
    std::size_t index = 0;
    std::vector<double> values; // one per axis
    std::optional<SummaryReport> summary;
    std::string error; // set when the point failed
};

struct SweepOutput {
    std::vector<std::string> axis_paths;
    std::vector<SweepPoint> points;
};

/// Cartesian sweep over the scenario's sweep axes; each point is patched,
/// re-validated and run in isolation. Point failures are recorded and the
/// sweep continues. Points execute concurrently up to `workers`.
SweepOutput cmd_sweep(const Scenario& base, int workers);

void write_trajectory_csv(const TrajectoryRecord& rec, const std::filesystem::path& file);
void write_summary_json(const SummaryReport& summary, const std::filesystem::path& file);
void write_sweep_outputs(const SweepOutput& sweep, const std::filesystem::path& out_dir);

} // namespace renewal
