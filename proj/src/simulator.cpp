#include "renewal/simulator.hpp"

#include <cmath>
#include <string>

#include "renewal/errors.hpp"
#include "renewal/kernels.hpp"
#include "renewal/math.hpp"

namespace renewal {

namespace {

// Per-scenario constants of the renewal quadrature. b_weights[i] is the
// weight of history slot i (age (i+1)*delta at evaluation time): trapezoid
// node i+1 times A_{i+1}. The oldest slot of the pre-step window has age
// tau_bar + delta at evaluation time and drops out.
struct ConvolutionPlan {
    std::vector<double> b_weights; // size K
    std::vector<double> q;         // w_j * eta_j
    double implicit_weight;        // (delta/2) * A_0
};

ConvolutionPlan make_plan(const SigmaGrid& grid, const InfectivityKernel& kernel) {
    ConvolutionPlan plan;
    const std::size_t K = kernel.last();
    plan.b_weights.resize(K);
    for (std::size_t i = 0; i < K; ++i)
        plan.b_weights[i] = trapezoid_weight(i + 1, K, kernel.delta()) * kernel.a(i + 1);
    plan.q.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) plan.q[j] = grid[j].weight * grid[j].eta;
    plan.implicit_weight = trapezoid_weight(0, K, kernel.delta()) * kernel.a(0);
    return plan;
}

double solve_force(const HistoryState& history, const ConvolutionPlan& plan,
                   std::span<const double> S_now, int threads) {
    const double b = kernels::history_scalar(history.view(), plan.b_weights, plan.q,
                                             plan.b_weights.size(), threads);
    double mass_now = 0.0;
    for (std::size_t j = 0; j < S_now.size(); ++j) mass_now += plan.q[j] * S_now[j];
    const double c = plan.implicit_weight * mass_now;
    if (c >= 1.0)
        throw StepSizeError("implicit renewal endpoint weight " + std::to_string(c) +
                            " >= 1 at t = " + std::to_string(history.t_now() + history.delta()) +
                            "; reduce the step size");
    return b / (1.0 - c);
}

// Exact solution of S' = lambda - (mu + eta*F) S over one step with F frozen.
void integrating_factor_step(const HistoryState& state, const SigmaGrid& grid,
                             const ModelParams& params, double force, double dt,
                             std::span<double> S_out) {
    const double* S_old = state.view().s_row(0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double a = params.mu + grid[j].eta * force;
        const double target = grid[j].lambda / a;
        S_out[j] = target + (S_old[j] - target) * std::exp(-a * dt);
    }
}

void step_with_plan(HistoryState& state, const SigmaGrid& grid, const ModelParams& params,
                    const ConvolutionPlan& plan, int threads, std::vector<double>& scratch) {
    const double dt = state.delta();
    const double F_old = state.F_now();
    scratch.resize(state.classes());
    std::span<double> S_new(scratch);

    integrating_factor_step(state, grid, params, F_old, dt, S_new);
    const double F_pred = solve_force(state, plan, S_new, threads);

    integrating_factor_step(state, grid, params, 0.5 * (F_old + F_pred), dt, S_new);
    const double F_new = solve_force(state, plan, S_new, threads);

    state.push(S_new, F_new);
}

} // namespace

double force_of_infection(const HistoryState& history, const SigmaGrid& grid,
                          const InfectivityKernel& kernel, std::span<const double> S_now,
                          int threads) {
    if (history.slots() != kernel.slots())
        throw std::invalid_argument("history slot count does not match the kernel grid");
    return solve_force(history, make_plan(grid, kernel), S_now, threads);
}

void step_inplace(HistoryState& state, const SigmaGrid& grid, const ModelParams& params,
                  const InfectivityKernel& kernel, int threads) {
    validate(params);
    if (state.slots() != kernel.slots() || state.classes() != grid.size())
        throw std::invalid_argument("state does not match grid/kernel shape");
    const ConvolutionPlan plan = make_plan(grid, kernel);
    std::vector<double> scratch;
    step_with_plan(state, grid, params, plan, threads, scratch);
}

HistoryState step(HistoryState state, const SigmaGrid& grid, const ModelParams& params,
                  const InfectivityKernel& kernel, int threads) {
    step_inplace(state, grid, params, kernel, threads);
    return state;
}

Region classify_initial(const InitialCondition& ic, const SigmaGrid& grid,
                        const InfectivityKernel& kernel) {
    const auto state = HistoryState::from_initial(ic, grid.size(), kernel);
    const std::size_t K = kernel.last();
    const auto view = state.view();
    for (std::size_t shift = 0; shift <= K; ++shift) {
        double integral = 0.0;
        for (std::size_t k = 0; k + shift <= K; ++k) {
            const double a = kernel.a(k + shift);
            if (a == 0.0) continue;
            const double f = view.f(k);
            if (f == 0.0) continue;
            const double* s = view.s_row(k);
            double mass = 0.0;
            for (std::size_t j = 0; j < grid.size(); ++j)
                mass += grid[j].weight * grid[j].eta * s[j];
            integral += trapezoid_weight(k, K, kernel.delta()) * a * f * mass;
        }
        if (integral > 0.0) return Region::Interior;
    }
    return Region::Boundary;
}

TrajectoryRecord simulate(const InitialCondition& ic, const SigmaGrid& grid,
                          const ModelParams& params, const InfectivityKernel& kernel,
                          double t_end, const SimulateOptions& options) {
    validate(params);
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");

    HistoryState state = HistoryState::from_initial(ic, grid.size(), kernel);
    const double dt = kernel.delta();
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));

    TrajectoryRecord rec;
    rec.m = grid.size();
    rec.delta = dt;
    rec.tau_bar = kernel.tau_bar();
    rec.t.reserve(n_steps + 1);
    rec.F.reserve(n_steps + 1);
    rec.S.reserve((n_steps + 1) * rec.m);

    const ConvolutionPlan plan = make_plan(grid, kernel);
    std::vector<double> scratch;

    auto record_row = [&](std::size_t step_index) {
        rec.t.push_back(static_cast<double>(step_index) * dt);
        rec.F.push_back(state.F_now());
        const auto S_now = state.S_now();
        rec.S.insert(rec.S.end(), S_now.begin(), S_now.end());
        if (state.warm() && !rec.warm_row) rec.warm_row = rec.rows() - 1;
        for (const auto& obs : options.observers) obs(state, rec);
    };

    record_row(0);
    for (std::size_t i = 1; i <= n_steps; ++i) {
        step_with_plan(state, grid, params, plan, options.threads, scratch);
        record_row(i);
    }
    return rec;
}

} // namespace renewal
