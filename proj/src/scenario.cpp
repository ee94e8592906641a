#include "renewal/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "renewal/errors.hpp"

namespace renewal {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key)) fail(child(path, key), "unknown key");
}

const json& member(const json& j, const std::string& path, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) fail(child(path, key), "missing required key");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

bool as_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

double number_or(const json& j, const std::string& path, const std::string& key, double dflt) {
    auto it = j.find(key);
    return it == j.end() ? dflt : as_number(*it, child(path, key));
}

bool bool_or(const json& j, const std::string& path, const std::string& key, bool dflt) {
    auto it = j.find(key);
    return it == j.end() ? dflt : as_bool(*it, child(path, key));
}

std::vector<double> as_number_list(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>()};
    if (!j.is_array() || j.empty()) fail(path, "expected a number or non-empty array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

SigmaGrid parse_sigma(const json& j, const std::string& path) {
    check_keys(j, path, {"classes"});
    const json& arr = member(j, path, "classes");
    if (!arr.is_array() || arr.empty()) fail(child(path, "classes"), "expected a non-empty array");
    std::vector<SusceptibilityClass> classes;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string cpath = path + ".classes[" + std::to_string(i) + "]";
        check_keys(arr[i], cpath, {"weight", "eta", "lambda"});
        SusceptibilityClass c;
        c.weight = number_or(arr[i], cpath, "weight", 1.0);
        c.eta = as_number(member(arr[i], cpath, "eta"), child(cpath, "eta"));
        c.lambda = as_number(member(arr[i], cpath, "lambda"), child(cpath, "lambda"));
        classes.push_back(c);
    }
    try {
        return SigmaGrid(std::move(classes));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

KernelFamily parse_kernel_family(const json& j, const std::string& path) {
    const json& type = member(j, path, "type");
    if (!type.is_string()) fail(child(path, "type"), "expected a string");
    const std::string t = type.get<std::string>();
    try {
        if (t == "boxcar") {
            check_keys(j, path, {"type", "delta", "height", "width"});
            Boxcar b;
            b.height = as_number(member(j, path, "height"), child(path, "height"));
            b.width = as_number(member(j, path, "width"), child(path, "width"));
            validate(KernelFamily{b});
            return b;
        }
        if (t == "truncated_exponential") {
            check_keys(j, path, {"type", "delta", "beta", "gamma", "cutoff"});
            TruncatedExponential e;
            e.beta = as_number(member(j, path, "beta"), child(path, "beta"));
            e.gamma = as_number(member(j, path, "gamma"), child(path, "gamma"));
            e.cutoff = as_number(member(j, path, "cutoff"), child(path, "cutoff"));
            validate(KernelFamily{e});
            return e;
        }
        if (t == "truncated_gamma") {
            check_keys(j, path, {"type", "delta", "scale", "shape", "cutoff"});
            TruncatedGamma g;
            g.scale = as_number(member(j, path, "scale"), child(path, "scale"));
            g.shape = as_number(member(j, path, "shape"), child(path, "shape"));
            g.cutoff = as_number(member(j, path, "cutoff"), child(path, "cutoff"));
            validate(KernelFamily{g});
            return g;
        }
        if (t == "table") {
            check_keys(j, path, {"type", "delta", "points"});
            const json& pts = member(j, path, "points");
            if (!pts.is_array()) fail(child(path, "points"), "expected an array of [tau, A] pairs");
            Table tab;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const std::string ppath = path + ".points[" + std::to_string(i) + "]";
                if (!pts[i].is_array() || pts[i].size() != 2) fail(ppath, "expected [tau, A]");
                tab.points.emplace_back(as_number(pts[i][0], ppath + "[0]"),
                                        as_number(pts[i][1], ppath + "[1]"));
            }
            validate(KernelFamily{tab});
            return tab;
        }
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(child(path, "type"),
         "unknown kernel type '" + t +
             "' (expected boxcar, truncated_exponential, truncated_gamma or table)");
}

Profile parse_profile(const json& j, const std::string& path) {
    const json& type = member(j, path, "profile");
    if (!type.is_string()) fail(child(path, "profile"), "expected a string");
    const std::string t = type.get<std::string>();
    if (t == "constant") {
        check_keys(j, path, {"profile", "values"});
        return ConstantProfile{as_number_list(member(j, path, "values"), child(path, "values"))};
    }
    if (t == "ramp") {
        check_keys(j, path, {"profile", "from", "to"});
        RampProfile r;
        r.from = as_number_list(member(j, path, "from"), child(path, "from"));
        r.to = as_number_list(member(j, path, "to"), child(path, "to"));
        if (r.from.size() != r.to.size()) fail(path, "ramp from/to lengths differ");
        return r;
    }
    if (t == "pulse_oldest") {
        check_keys(j, path, {"profile", "values"});
        return PulseOldestProfile{
            as_number_list(member(j, path, "values"), child(path, "values"))};
    }
    fail(child(path, "profile"),
         "unknown profile '" + t + "' (expected constant, ramp or pulse_oldest)");
}

SweepSpec parse_sweep(const json& j, const std::string& path) {
    check_keys(j, path, {"axes"});
    const json& arr = member(j, path, "axes");
    if (!arr.is_array() || arr.empty()) fail(child(path, "axes"), "empty sweep axis list");
    SweepSpec spec;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string apath = path + ".axes[" + std::to_string(i) + "]";
        check_keys(arr[i], apath, {"path", "values", "from", "to", "count"});
        SweepAxis axis;
        const json& p = member(arr[i], apath, "path");
        if (!p.is_string()) fail(child(apath, "path"), "expected a string");
        axis.path = p.get<std::string>();
        if (arr[i].contains("values")) {
            const json& vals = arr[i]["values"];
            if (!vals.is_array()) fail(child(apath, "values"), "expected an array");
            for (std::size_t v = 0; v < vals.size(); ++v)
                axis.values.push_back(
                    as_number(vals[v], apath + ".values[" + std::to_string(v) + "]"));
        } else {
            const double from = as_number(member(arr[i], apath, "from"), child(apath, "from"));
            const double to = as_number(member(arr[i], apath, "to"), child(apath, "to"));
            const double count = as_number(member(arr[i], apath, "count"), child(apath, "count"));
            if (count < 1 || count != std::floor(count))
                fail(child(apath, "count"), "expected a positive integer");
            const auto n = static_cast<std::size_t>(count);
            for (std::size_t v = 0; v < n; ++v)
                axis.values.push_back(
                    n == 1 ? from : from + (to - from) * static_cast<double>(v) /
                                               static_cast<double>(n - 1));
        }
        if (axis.values.empty()) fail(apath, "empty sweep axis");
        spec.axes.push_back(std::move(axis));
    }
    return spec;
}

json profile_to_json(const Profile& p) {
    json j;
    if (const auto* c = std::get_if<ConstantProfile>(&p)) {
        j["profile"] = "constant";
        j["values"] = c->values;
    } else if (const auto* r = std::get_if<RampProfile>(&p)) {
        j["profile"] = "ramp";
        j["from"] = r->from;
        j["to"] = r->to;
    } else {
        j["profile"] = "pulse_oldest";
        j["values"] = std::get<PulseOldestProfile>(p).values;
    }
    return j;
}

json kernel_to_json(const KernelFamily& f, double delta) {
    json j;
    j["delta"] = delta;
    if (const auto* b = std::get_if<Boxcar>(&f)) {
        j["type"] = "boxcar";
        j["height"] = b->height;
        j["width"] = b->width;
    } else if (const auto* e = std::get_if<TruncatedExponential>(&f)) {
        j["type"] = "truncated_exponential";
        j["beta"] = e->beta;
        j["gamma"] = e->gamma;
        j["cutoff"] = e->cutoff;
    } else if (const auto* g = std::get_if<TruncatedGamma>(&f)) {
        j["type"] = "truncated_gamma";
        j["scale"] = g->scale;
        j["shape"] = g->shape;
        j["cutoff"] = g->cutoff;
    } else {
        const auto& t = std::get<Table>(f);
        j["type"] = "table";
        json pts = json::array();
        for (const auto& [tau, a] : t.points) pts.push_back({tau, a});
        j["points"] = std::move(pts);
    }
    return j;
}

} // namespace

Scenario scenario_from_json(const json& j) {
    check_keys(j, "", {"sigma", "params", "kernel", "initial", "run", "tolerances", "sweep"});

    SigmaGrid sigma = parse_sigma(member(j, "", "sigma"), "sigma");

    const json& params_j = member(j, "", "params");
    check_keys(params_j, "params", {"mu"});
    ModelParams params{as_number(member(params_j, "params", "mu"), "params.mu")};
    try {
        validate(params);
    } catch (const std::invalid_argument& e) {
        fail("params.mu", e.what());
    }

    const json& kernel_j = member(j, "", "kernel");
    KernelFamily family = parse_kernel_family(kernel_j, "kernel");
    GridSpec grid{as_number(member(kernel_j, "kernel", "delta"), "kernel.delta")};
    if (!(grid.delta > 0.0)) fail("kernel.delta", "must be > 0");

    const json& initial_j = member(j, "", "initial");
    check_keys(initial_j, "initial", {"S", "F"});
    InitialCondition ic{parse_profile(member(initial_j, "initial", "S"), "initial.S"),
                        parse_profile(member(initial_j, "initial", "F"), "initial.F")};

    const json& run_j = member(j, "", "run");
    check_keys(run_j, "run", {"t_end", "record_U", "record_W", "monitor"});
    RunConfig run;
    run.t_end = as_number(member(run_j, "run", "t_end"), "run.t_end");
    if (!(run.t_end > 0.0)) fail("run.t_end", "must be > 0");
    run.record_U = bool_or(run_j, "run", "record_U", true);
    run.record_W = bool_or(run_j, "run", "record_W", true);
    run.monitor = bool_or(run_j, "run", "monitor", true);

    ToleranceConfig tols;
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        check_keys(t, "tolerances",
                   {"C_tol", "solver_rel_tol", "identity_tol", "p0_F_tol", "p0_S_rel_tol",
                    "pbar_rel_tol"});
        tols.C_tol = number_or(t, "tolerances", "C_tol", tols.C_tol);
        tols.solver_rel_tol = number_or(t, "tolerances", "solver_rel_tol", tols.solver_rel_tol);
        tols.identity_tol = number_or(t, "tolerances", "identity_tol", tols.identity_tol);
        tols.p0_F_tol = number_or(t, "tolerances", "p0_F_tol", tols.p0_F_tol);
        tols.p0_S_rel_tol = number_or(t, "tolerances", "p0_S_rel_tol", tols.p0_S_rel_tol);
        tols.pbar_rel_tol = number_or(t, "tolerances", "pbar_rel_tol", tols.pbar_rel_tol);
        for (double v : {tols.C_tol, tols.solver_rel_tol, tols.identity_tol, tols.p0_F_tol,
                         tols.p0_S_rel_tol, tols.pbar_rel_tol})
            if (!(v > 0.0)) fail("tolerances", "all tolerance constants must be > 0");
    }

    std::optional<SweepSpec> sweep;
    if (j.contains("sweep")) sweep = parse_sweep(j["sweep"], "sweep");

    return Scenario{std::move(sigma), params,        std::move(family), grid,
                    std::move(ic),    std::move(run), tols,              std::move(sweep)};
}

json scenario_to_json(const Scenario& s) {
    json j;
    json classes = json::array();
    for (const auto& c : s.sigma.classes())
        classes.push_back({{"weight", c.weight}, {"eta", c.eta}, {"lambda", c.lambda}});
    j["sigma"] = {{"classes", std::move(classes)}};
    j["params"] = {{"mu", s.params.mu}};
    j["kernel"] = kernel_to_json(s.kernel, s.grid.delta);
    j["initial"] = {{"S", profile_to_json(s.initial.S)}, {"F", profile_to_json(s.initial.F)}};
    j["run"] = {{"t_end", s.run.t_end},
                {"record_U", s.run.record_U},
                {"record_W", s.run.record_W},
                {"monitor", s.run.monitor}};
    j["tolerances"] = {{"C_tol", s.tolerances.C_tol},
                       {"solver_rel_tol", s.tolerances.solver_rel_tol},
                       {"identity_tol", s.tolerances.identity_tol},
                       {"p0_F_tol", s.tolerances.p0_F_tol},
                       {"p0_S_rel_tol", s.tolerances.p0_S_rel_tol},
                       {"pbar_rel_tol", s.tolerances.pbar_rel_tol}};
    if (s.sweep) {
        json axes = json::array();
        for (const auto& axis : s.sweep->axes)
            axes.push_back({{"path", axis.path}, {"values", axis.values}});
        j["sweep"] = {{"axes", std::move(axes)}};
    }
    return j;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file: " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + file.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

namespace {

json monitor_to_json(const MonitorReport& m) {
    json j;
    j["tol"] = m.tol;
    j["intervals"] = m.intervals;
    j["U_checked"] = m.U_checked;
    j["W_checked"] = m.W_checked;
    j["violations_U"] = m.violations_U;
    j["violations_W"] = m.violations_W;
    if (m.U_checked) {
        j["max_fd_U"] = m.max_fd_U;
        j["max_abs_fd_minus_dU"] = m.max_abs_fd_minus_dU;
    }
    if (m.W_checked) {
        j["max_fd_W"] = m.max_fd_W;
        j["max_fd_W_minus_bound"] = m.max_fd_W_minus_bound;
    }
    return j;
}

json oracle_to_json(const OracleReport& o) {
    json j;
    j["name"] = o.name;
    j["max_abs_err"] = o.max_abs_err;
    j["tolerance"] = o.tolerance;
    j["pass"] = o.pass;
    if (o.observed_order != 0.0)
        j["observed_order"] = std::isfinite(o.observed_order)
                                  ? json(o.observed_order)
                                  : json("exact");
    return j;
}

} // namespace

json summary_to_json(const SummaryReport& s) {
    json j;
    j["R0"] = s.R0;
    json eq;
    eq["S0"] = s.S0;
    eq["eta0"] = s.eta0;
    if (s.endemic) {
        eq["endemic"] = {{"Fbar", s.endemic->Fbar},
                         {"Sbar", s.endemic->Sbar},
                         {"etabar", s.endemic->etabar},
                         {"vbar", s.endemic->vbar}};
    } else {
        eq["endemic"] = nullptr;
    }
    j["equilibria"] = std::move(eq);
    if (s.classification) j["classification"] = *s.classification;
    if (s.convergence) {
        json c;
        c["converged_to"] = s.convergence->converged_to;
        c["t_end"] = s.convergence->t_end;
        c["F_end"] = s.convergence->F_end;
        c["S_rel_dev_P0"] = s.convergence->S_rel_dev_P0;
        if (s.convergence->rel_dist_Pbar) c["rel_dist_Pbar"] = *s.convergence->rel_dist_Pbar;
        j["convergence"] = std::move(c);
    }
    if (s.monitor) j["lyapunov_monitor"] = monitor_to_json(*s.monitor);
    if (!s.oracles.empty()) {
        json arr = json::array();
        for (const auto& o : s.oracles) arr.push_back(oracle_to_json(o));
        j["oracles"] = std::move(arr);
    }
    return j;
}

} // namespace renewal
