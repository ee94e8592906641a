#include "renewal/lyapunov.hpp"

#include <cmath>
#include <string>

#include "renewal/errors.hpp"
#include "renewal/kernels.hpp"
#include "renewal/math.hpp"

namespace renewal {

namespace {

void require_warm(const HistoryState& state, const char* who) {
    if (!state.warm())
        throw DomainError(std::string(who) + " requires a warm state (t >= tau_bar)");
}

void require_shapes(const HistoryState& state, const SigmaGrid& grid, std::size_t kernel_slots,
                    const char* who) {
    if (state.classes() != grid.size() || state.slots() != kernel_slots)
        throw std::invalid_argument(std::string(who) + ": state/grid/kernel shapes disagree");
}

void require_interior_window(const HistoryState& state, const char* who) {
    for (std::size_t k = 0; k < state.slots(); ++k)
        if (state.F(k) == 0.0)
            throw DomainError(std::string(who) + " is undefined on the boundary (zero F slot)");
}

// u_k = trapezoid node weight times the per-slot kernel factor.
std::vector<double> node_weights(std::span<const double> factor, double delta) {
    const std::size_t K = factor.size() - 1;
    std::vector<double> u(factor.size());
    for (std::size_t k = 0; k <= K; ++k) u[k] = trapezoid_weight(k, K, delta) * factor[k];
    return u;
}

std::vector<double> eta_weights(const SigmaGrid& grid) {
    std::vector<double> q(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) q[j] = grid[j].weight * grid[j].eta;
    return q;
}

} // namespace

double eval_U(const HistoryState& state, const EquilibriumSet& eq, const LyapunovKernels& kernels,
              const SigmaGrid& grid, int threads) {
    require_warm(state, "eval_U");
    require_shapes(state, grid, kernels.xi.size(), "eval_U");

    double point_term = 0.0;
    const auto S_now = state.S_now();
    for (std::size_t j = 0; j < grid.size(); ++j)
        point_term += grid[j].weight * eq.S0[j] * convexity_gauge(S_now[j] / eq.S0[j]);

    const auto u = node_weights(kernels.xi, state.delta());
    const auto q = eta_weights(grid);
    const double load_term = kernels::history_scalar(state.view(), u, q, state.slots(), threads);
    return point_term + load_term;
}

double eval_dU_analytic(const HistoryState& state, const EquilibriumSet& eq,
                        const SigmaGrid& grid, const ModelParams& params) {
    require_warm(state, "eval_dU_analytic");
    if (state.classes() != grid.size())
        throw std::invalid_argument("eval_dU_analytic: state/grid shapes disagree");

    const auto S_now = state.S_now();
    double quad_term = 0.0;
    double eta_mass = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double dev = 1.0 - eq.S0[j] / S_now[j];
        quad_term += grid[j].weight * S_now[j] * dev * dev;
        eta_mass += grid[j].weight * grid[j].eta * S_now[j];
    }
    return -params.mu * quad_term - (1.0 - eq.R0) * state.F_now() * eta_mass;
}

double eval_W(const HistoryState& state, const EquilibriumSet& eq, const LyapunovKernels& kernels,
              const SigmaGrid& grid, int threads) {
    require_warm(state, "eval_W");
    if (!eq.endemic) throw std::invalid_argument("eval_W requires an endemic equilibrium");
    require_shapes(state, grid, kernels.kappa.size(), "eval_W");
    require_interior_window(state, "eval_W");

    const auto& en = *eq.endemic;
    double point_term = 0.0;
    const auto S_now = state.S_now();
    for (std::size_t j = 0; j < grid.size(); ++j)
        point_term += grid[j].weight * en.Sbar[j] * convexity_gauge(S_now[j] / en.Sbar[j]);

    const auto u = node_weights(kernels.kappa, state.delta());
    std::vector<double> r(grid.size()), scale(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        r[j] = grid[j].weight * en.vbar[j];
        scale[j] = 1.0 / (en.Fbar * en.Sbar[j]);
    }
    const double load_term =
        kernels::history_gauge_scalar(state.view(), u, r, scale, state.slots(), threads);
    if (!std::isfinite(load_term))
        throw DomainError("eval_W: gauge argument left the admissible region");
    return point_term + load_term;
}

void eval_G(const HistoryState& state, const InfectivityKernel& kernel, std::span<double> out,
            int threads) {
    require_warm(state, "eval_G");
    if (state.slots() != kernel.slots())
        throw std::invalid_argument("eval_G: state/kernel shapes disagree");
    const auto u = node_weights(kernel.samples(), state.delta());
    kernels::history_per_class(state.view(), u, state.slots(), threads, out);
}

double eval_dW_bound(const HistoryState& state, const EquilibriumSet& eq,
                     const InfectivityKernel& kernel, const SigmaGrid& grid,
                     const ModelParams& params, int threads) {
    require_warm(state, "eval_dW_bound");
    if (!eq.endemic) throw std::invalid_argument("eval_dW_bound requires an endemic equilibrium");
    require_shapes(state, grid, kernel.slots(), "eval_dW_bound");

    const double F_now = state.F_now();
    if (F_now == 0.0) throw DomainError("eval_dW_bound is undefined at F(t) = 0");

    std::vector<double> G(grid.size());
    eval_G(state, kernel, G, threads);

    const auto& en = *eq.endemic;
    const auto S_now = state.S_now();
    double total = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double Sj = S_now[j];
        const double dev = 1.0 - en.Sbar[j] / Sj;
        const double gauge_S = convexity_gauge(en.Sbar[j] / Sj);
        const double gauge_G = convexity_gauge(en.etabar * G[j] / (F_now * en.Sbar[j]));
        total -= grid[j].weight * (params.mu * Sj * dev * dev + en.vbar[j] * (gauge_S + gauge_G));
    }
    return total;
}

std::vector<double> jensen_gaps(const HistoryState& state, const EquilibriumSet& eq,
                                const InfectivityKernel& kernel, const SigmaGrid& grid,
                                int threads) {
    require_warm(state, "jensen_gaps");
    if (!eq.endemic) throw std::invalid_argument("jensen_gaps requires an endemic equilibrium");
    require_shapes(state, grid, kernel.slots(), "jensen_gaps");
    require_interior_window(state, "jensen_gaps");

    const auto& en = *eq.endemic;
    const auto u = node_weights(kernel.samples(), state.delta());
    std::vector<double> scale(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) scale[j] = 1.0 / (en.Fbar * en.Sbar[j]);

    std::vector<double> lhs(grid.size());
    kernels::history_log_per_class(state.view(), u, scale, state.slots(), threads, lhs);

    std::vector<double> G(grid.size());
    kernels::history_per_class(state.view(), u, state.slots(), threads, G);

    std::vector<double> gap(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        gap[j] = en.etabar * lhs[j] - std::log(en.etabar * G[j] * scale[j]);
    return gap;
}

LyapunovSample eval_sample(const HistoryState& state, const EquilibriumSet& eq,
                           const LyapunovKernels& kernels, const InfectivityKernel& kernel,
                           const SigmaGrid& grid, const ModelParams& params, bool with_W,
                           int threads) {
    LyapunovSample s;
    s.t = state.t_now();
    s.U = eval_U(state, eq, kernels, grid, threads);
    s.dU_analytic = eval_dU_analytic(state, eq, grid, params);
    if (with_W) {
        s.W = eval_W(state, eq, kernels, grid, threads);
        s.dW_bound = eval_dW_bound(state, eq, kernel, grid, params, threads);
        s.G.resize(grid.size());
        eval_G(state, kernel, s.G, threads);
    }
    return s;
}

MonitorReport monotonicity_monitor(const TrajectoryRecord& rec, double C_tol) {
    if (rec.rows() < 2) throw std::invalid_argument("monitor needs at least 2 samples");
    MonitorReport rep;
    rep.tol = C_tol * rec.delta * rec.delta;
    rep.U_checked = !rec.U.empty();
    rep.W_checked = !rec.W.empty();
    if (!rec.warm_row) return rep;

    const double inv_dt = 1.0 / rec.delta;
    for (std::size_t i = *rec.warm_row; i + 1 < rec.rows(); ++i) {
        rep.intervals += 1;
        if (rep.U_checked && std::isfinite(rec.U[i]) && std::isfinite(rec.U[i + 1])) {
            const double fd = (rec.U[i + 1] - rec.U[i]) * inv_dt;
            if (fd > rep.max_fd_U) rep.max_fd_U = fd;
            if (fd > rep.tol) rep.violations_U += 1;
            const double davg = 0.5 * (rec.dU_analytic[i] + rec.dU_analytic[i + 1]);
            rep.max_abs_fd_minus_dU = std::max(rep.max_abs_fd_minus_dU, std::abs(fd - davg));
        }
        if (rep.W_checked && std::isfinite(rec.W[i]) && std::isfinite(rec.W[i + 1])) {
            const double fd = (rec.W[i + 1] - rec.W[i]) * inv_dt;
            if (fd > rep.max_fd_W) rep.max_fd_W = fd;
            if (fd > rep.tol) rep.violations_W += 1;
            const double bavg = 0.5 * (rec.dW_bound[i] + rec.dW_bound[i + 1]);
            rep.max_fd_W_minus_bound = std::max(rep.max_fd_W_minus_bound, fd - bavg);
        }
    }
    return rep;
}

StepObserver make_lyapunov_recorder(const EquilibriumSet& eq, const LyapunovKernels& kernels,
                                    const InfectivityKernel& kernel, const SigmaGrid& grid,
                                    const ModelParams& params, bool record_U, bool record_W,
                                    bool record_G, int threads) {
    if (record_W && !eq.endemic)
        throw std::invalid_argument("cannot record W without an endemic equilibrium");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    // capture by value: recorders may outlive the caller's locals
    return [=](const HistoryState& state, TrajectoryRecord& rec) {
        if (record_U) {
            rec.U.push_back(state.warm() ? eval_U(state, eq, kernels, grid, threads) : nan);
            rec.dU_analytic.push_back(state.warm() ? eval_dU_analytic(state, eq, grid, params)
                                                   : nan);
        }
        if (record_W) {
            rec.W.push_back(state.warm() ? eval_W(state, eq, kernels, grid, threads) : nan);
            rec.dW_bound.push_back(
                state.warm() ? eval_dW_bound(state, eq, kernel, grid, params, threads) : nan);
        }
        if (record_G) {
            const std::size_t n = rec.G.size();
            rec.G.resize(n + grid.size(), nan);
            if (state.warm())
                eval_G(state, kernel, std::span<double>(rec.G).subspan(n, grid.size()), threads);
        }
    };
}

} // namespace renewal
