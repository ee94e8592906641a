#include "renewal/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "renewal/errors.hpp"
#include "renewal/lyapunov.hpp"
#include "renewal/math.hpp"

namespace renewal {

namespace {

using nlohmann::json;

struct Prepared {
    InfectivityKernel kernel;
    EquilibriumSet eq;
    Region region;
};

Prepared prepare(const Scenario& s) {
    InfectivityKernel kernel = sample_kernel(s.kernel, s.grid);
    SolverTols tols;
    tols.rel_tol = s.tolerances.solver_rel_tol;
    tols.identity_tol = s.tolerances.identity_tol;
    EquilibriumSet eq = compute_equilibria(s.sigma, s.params, kernel, tols);
    const Region region = classify_initial(s.initial, s.sigma, kernel);
    return {std::move(kernel), std::move(eq), region};
}

SummaryReport base_summary(const Prepared& p) {
    SummaryReport sum;
    sum.R0 = p.eq.R0;
    sum.S0 = p.eq.S0;
    sum.eta0 = p.eq.eta0;
    sum.endemic = p.eq.endemic;
    sum.classification = p.region == Region::Interior ? "Interior" : "Boundary";
    return sum;
}

ConvergenceVerdict make_verdict(const TrajectoryRecord& rec, const Prepared& p,
                                const ToleranceConfig& tols) {
    ConvergenceVerdict v;
    v.t_end = rec.t.back();
    v.F_end = rec.F.back();
    const auto S_end = rec.s_row(rec.rows() - 1);
    double dev0 = 0.0;
    for (std::size_t j = 0; j < rec.m; ++j)
        dev0 = std::max(dev0, std::abs(S_end[j] - p.eq.S0[j]) / p.eq.S0[j]);
    v.S_rel_dev_P0 = dev0;
    if (p.eq.endemic) {
        const auto& en = *p.eq.endemic;
        double dist = std::abs(v.F_end - en.Fbar) / en.Fbar;
        for (std::size_t j = 0; j < rec.m; ++j)
            dist = std::max(dist, std::abs(S_end[j] - en.Sbar[j]) / en.Sbar[j]);
        v.rel_dist_Pbar = dist;
    }
    if (v.rel_dist_Pbar && *v.rel_dist_Pbar < tols.pbar_rel_tol)
        v.converged_to = "Pbar";
    else if (v.F_end < tols.p0_F_tol && v.S_rel_dev_P0 < tols.p0_S_rel_tol)
        v.converged_to = "P0";
    else
        v.converged_to = "none";
    return v;
}

RunOutput run_prepared(const Scenario& s, const Prepared& p, bool force_monitors) {
    const bool record_U = s.run.record_U || force_monitors;
    const bool with_W = (s.run.record_W || force_monitors) && p.eq.endemic.has_value() &&
                        p.region == Region::Interior;

    LyapunovKernels lk = build_lyapunov_kernels(
        p.kernel, p.eq.eta0,
        p.eq.endemic ? std::optional<double>(p.eq.endemic->etabar) : std::nullopt);

    SimulateOptions opt;
    if (record_U || with_W)
        opt.observers.push_back(make_lyapunov_recorder(p.eq, lk, p.kernel, s.sigma, s.params,
                                                       record_U, with_W));

    RunOutput out;
    out.trajectory = simulate(s.initial, s.sigma, s.params, p.kernel, s.run.t_end, opt);
    out.summary = base_summary(p);
    out.summary.convergence = make_verdict(out.trajectory, p, s.tolerances);
    if ((s.run.monitor || force_monitors) && (record_U || with_W))
        out.summary.monitor = monotonicity_monitor(out.trajectory, s.tolerances.C_tol);
    return out;
}

bool nearly_integer(double x) { return std::abs(x - std::round(x)) < 1e-9 * std::max(1.0, x); }

bool refinement_applicable(const KernelFamily& family, double delta) {
    if (const auto* b = std::get_if<Boxcar>(&family)) return nearly_integer(b->width / delta);
    if (const auto* t = std::get_if<Table>(&family)) {
        for (const auto& [tau, a] : t->points)
            if (!nearly_integer(tau / delta)) return false;
        return true;
    }
    // Truncated families are smooth only when the cutoff lands on the grid
    // and the retained tail has effectively decayed to zero.
    double cutoff = 0.0, at_cutoff = 0.0, peak = 0.0;
    if (const auto* e = std::get_if<TruncatedExponential>(&family)) {
        cutoff = e->cutoff;
        at_cutoff = eval_family(family, cutoff);
        peak = e->beta;
    } else {
        const auto& g = std::get<TruncatedGamma>(family);
        cutoff = g.cutoff;
        at_cutoff = eval_family(family, cutoff);
        for (double tau = 0.0; tau <= cutoff; tau += cutoff / 256.0)
            peak = std::max(peak, eval_family(family, tau));
    }
    return nearly_integer(cutoff / delta) && at_cutoff <= 1e-12 * std::max(peak, 1e-300);
}

bool all_eta_one(const SigmaGrid& grid) {
    for (const auto& c : grid.classes())
        if (c.eta != 1.0) return false;
    return true;
}

// The refinement oracle needs a value-continuous force at turn-on: initial
// data carrying a renewal mismatch at t = 0 inject an O(delta) transient
// that caps the observed order near 1 regardless of the scheme.
bool turn_on_consistent(const Scenario& s, const InfectivityKernel& kernel) {
    const auto state = HistoryState::from_initial(s.initial, s.sigma.size(), kernel);
    const std::size_t K = kernel.last();
    double renewal = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
        double mass = 0.0;
        for (std::size_t j = 0; j < s.sigma.size(); ++j)
            mass += s.sigma[j].weight * s.sigma[j].eta * state.S(k, j);
        renewal += trapezoid_weight(k, K, kernel.delta()) * kernel.a(k) * state.F(k) * mass;
    }
    const double f0 = state.F(0);
    return std::abs(renewal - f0) <= 1e-9 * std::max(1.0, std::abs(f0));
}

} // namespace

Scenario apply_overrides(Scenario s, const Overrides& o) {
    if (o.dt) {
        if (!(*o.dt > 0.0)) throw ConfigError("--dt must be > 0");
        s.grid.delta = *o.dt;
    }
    if (o.t_end) {
        if (!(*o.t_end > 0.0)) throw ConfigError("--t-end must be > 0");
        s.run.t_end = *o.t_end;
    }
    return s;
}

SummaryReport cmd_equilibrium(const Scenario& s) { return base_summary(prepare(s)); }

RunOutput cmd_run(const Scenario& s) {
    const Prepared p = prepare(s);
    return run_prepared(s, p, /*force_monitors=*/false);
}

CertifyOutput cmd_certify(const Scenario& s) {
    const Prepared p = prepare(s);
    RunOutput run = run_prepared(s, p, /*force_monitors=*/true);

    CertifyOutput out;
    out.summary = std::move(run.summary);

    if (all_eta_one(s.sigma) &&
        !std::holds_alternative<PulseOldestProfile>(s.initial.S))
        out.summary.oracles.push_back(homogeneous_reduction_check(
            s.sigma, s.params, p.kernel, s.initial, s.run.t_end));
    if (s.sigma.size() <= 2)
        out.summary.oracles.push_back(
            closed_form_equilibrium_check(s.sigma, s.params, p.kernel));
    if (refinement_applicable(s.kernel, s.grid.delta) && turn_on_consistent(s, p.kernel)) {
        // Order measurement does not need the full horizon.
        const double tau_bar = p.kernel.tau_bar();
        double T = std::min(s.run.t_end, 10.0 * tau_bar);
        T = std::max(s.grid.delta * std::floor(T / s.grid.delta), s.grid.delta);
        out.summary.oracles.push_back(
            refinement_study(s.kernel, s.grid.delta, s.sigma, s.params, s.initial, T));
    }

    bool pass = true;
    if (out.summary.monitor && !out.summary.monitor->clean()) pass = false;
    for (const auto& o : out.summary.oracles) pass = pass && o.pass;
    // dW_bound must be non-positive wherever it was recorded.
    for (double b : run.trajectory.dW_bound)
        if (std::isfinite(b) && b > 0.0) pass = false;
    out.pass = pass;
    return out;
}

SweepOutput cmd_sweep(const Scenario& base, int workers) {
    if (!base.sweep) throw ConfigError("sweep: missing sweep section in config");
    const auto& axes = base.sweep->axes;

    SweepOutput out;
    std::size_t count = 1;
    for (const auto& axis : axes) {
        out.axis_paths.push_back(axis.path);
        count *= axis.values.size();
    }

    json base_json = scenario_to_json(base);
    base_json.erase("sweep"); // points are plain scenarios

    out.points.resize(count);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(workers, 1)) if (workers > 1)
#endif
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
        SweepPoint& pt = out.points[static_cast<std::size_t>(i)];
        pt.index = static_cast<std::size_t>(i);
        // Decode the mixed-radix point index into per-axis values.
        std::size_t rem = pt.index;
        pt.values.resize(axes.size());
        for (std::size_t a = axes.size(); a-- > 0;) {
            pt.values[a] = axes[a].values[rem % axes[a].values.size()];
            rem /= axes[a].values.size();
        }
        try {
            json patched = base_json;
            for (std::size_t a = 0; a < axes.size(); ++a) {
                const std::string ptr = "/" + [&] {
                    std::string p = axes[a].path;
                    std::replace(p.begin(), p.end(), '.', '/');
                    return p;
                }();
                const json::json_pointer jp(ptr);
                if (!patched.contains(jp))
                    throw ConfigError("sweep axis path not found: " + axes[a].path);
                if (!patched.at(jp).is_number())
                    throw ConfigError("sweep axis path is not a scalar: " + axes[a].path);
                patched[jp] = pt.values[a];
            }
            const Scenario point_scenario = scenario_from_json(patched);
            const Prepared p = prepare(point_scenario);
            RunOutput run = run_prepared(point_scenario, p, /*force_monitors=*/false);
            pt.summary = std::move(run.summary);
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
    }
    return out;
}

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void write_trajectory_csv(const TrajectoryRecord& rec, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot open output file: " + file.string());

    out << "t,F";
    for (std::size_t j = 0; j < rec.m; ++j) out << ",S_" << j;
    if (!rec.U.empty()) out << ",U,dU_analytic";
    if (!rec.W.empty()) out << ",W,dW_bound";
    out << "\n";
    for (std::size_t i = 0; i < rec.rows(); ++i) {
        out << fmt17(rec.t[i]) << ',' << fmt17(rec.F[i]);
        const auto row = rec.s_row(i);
        for (double s : row) out << ',' << fmt17(s);
        if (!rec.U.empty()) out << ',' << fmt17(rec.U[i]) << ',' << fmt17(rec.dU_analytic[i]);
        if (!rec.W.empty()) out << ',' << fmt17(rec.W[i]) << ',' << fmt17(rec.dW_bound[i]);
        out << "\n";
    }
    if (!out) throw ConfigError("failed writing " + file.string());
}

void write_summary_json(const SummaryReport& summary, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot open output file: " + file.string());
    out << summary_to_json(summary).dump(2) << "\n";
    if (!out) throw ConfigError("failed writing " + file.string());
}

void write_sweep_outputs(const SweepOutput& sweep, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::ofstream index(out_dir / "sweep_index.csv");
    if (!index) throw ConfigError("cannot open " + (out_dir / "sweep_index.csv").string());
    index << "point";
    for (const auto& p : sweep.axis_paths) index << ',' << p;
    index << ",R0,Fbar,verdict\n";

    for (const auto& pt : sweep.points) {
        char name[32];
        std::snprintf(name, sizeof name, "point_%04zu", pt.index);
        const auto dir = out_dir / name;
        std::filesystem::create_directories(dir);
        if (pt.summary) write_summary_json(*pt.summary, dir / "summary.json");

        index << pt.index;
        for (double v : pt.values) index << ',' << fmt17(v);
        if (pt.summary) {
            index << ',' << fmt17(pt.summary->R0) << ',';
            if (pt.summary->endemic) index << fmt17(pt.summary->endemic->Fbar);
            index << ','
                  << (pt.summary->convergence ? pt.summary->convergence->converged_to : "none");
        } else {
            std::string msg = pt.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            index << ",,,error: " << msg;
        }
        index << "\n";
    }
    if (!index) throw ConfigError("failed writing sweep index");
}

} // namespace renewal
