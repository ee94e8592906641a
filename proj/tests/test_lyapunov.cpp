#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "renewal/errors.hpp"
#include "renewal/lyapunov.hpp"
#include "renewal/math.hpp"

using namespace renewal;
using namespace testutil;

namespace {

HistoryState warm_constant_state(const std::vector<double>& S, double F,
                                 const InfectivityKernel& kernel) {
    const std::size_t m = S.size();
    std::vector<double> S_rows(kernel.slots() * m);
    std::vector<double> F_slots(kernel.slots(), F);
    for (std::size_t k = 0; k < kernel.slots(); ++k)
        for (std::size_t j = 0; j < m; ++j) S_rows[k * m + j] = S[j];
    return HistoryState::from_slots(std::move(S_rows), std::move(F_slots), m, kernel.delta(),
                                    kernel.tau_bar());
}

struct EndemicFixture {
    SigmaGrid grid = two_class_example();
    ModelParams params{0.1};
    InfectivityKernel kernel = boxcar_kernel(0.5, 4.0, 0.25);
    EquilibriumSet eq;
    LyapunovKernels lk;

    EndemicFixture() {
        eq = compute_equilibria(grid, params, kernel);
        lk = build_lyapunov_kernels(kernel, eq.eta0, eq.endemic->etabar);
    }
};

} // namespace

TEST_CASE("U vanishes exactly at the infection-free equilibrium") {
    const auto grid = two_class_example();
    const ModelParams params{0.1};
    const auto kernel = boxcar_kernel();
    const auto eq = compute_equilibria(grid, params, kernel);
    const auto lk = build_lyapunov_kernels(kernel, eq.eta0);

    const auto state = warm_constant_state(eq.S0, 0.0, kernel);
    CHECK(eval_U(state, eq, lk, grid) == 0.0);
    CHECK(eval_dU_analytic(state, eq, grid, params) == 0.0);
}

TEST_CASE("U requires a warm state") {
    const auto grid = one_class(0.1);
    const auto kernel = boxcar_kernel();
    const auto eq = compute_equilibria(grid, ModelParams{0.1}, kernel);
    const auto lk = build_lyapunov_kernels(kernel, eq.eta0);
    const auto cold = HistoryState::from_initial(constant_ic({1.0}, 0.0), 1, kernel);
    CHECK_THROWS_AS(eval_U(cold, eq, lk, grid), DomainError);
    CHECK_THROWS_AS(eval_dU_analytic(cold, eq, grid, ModelParams{0.1}), DomainError);
}

TEST_CASE("U at constant force over the infection-free susceptibles") {
    // S = S0, F = f: U = f * eta0 * quad(xi); for the boxcar the tail is
    // linear so the quadrature is exact: quad(xi) = eta0 * h * tau_bar^2 / 2.
    const auto grid = two_class_example();
    const ModelParams params{0.1};
    const auto kernel = boxcar_kernel(0.5, 4.0, 0.25);
    const auto eq = compute_equilibria(grid, params, kernel);
    const auto lk = build_lyapunov_kernels(kernel, eq.eta0);
    const double f = 0.37;
    const auto state = warm_constant_state(eq.S0, f, kernel);

    // independent hand evaluation of the double sum
    double expected = 0.0;
    const std::size_t K = kernel.last();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double inner = 0.0;
        for (std::size_t k = 0; k <= K; ++k)
            inner += trapezoid_weight(k, K, kernel.delta()) * lk.xi[k] * f * eq.S0[j];
        expected += grid[j].weight * grid[j].eta * inner;
    }
    const double closed = f * eq.eta0 * (eq.eta0 * 0.5 * 4.0 * 4.0 / 2.0);
    CHECK(expected == doctest::Approx(closed).epsilon(1e-13));
    CHECK(eval_U(state, eq, lk, grid) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("U of a uniformly doubled susceptible pool") {
    const auto grid = two_class_example();
    const ModelParams params{0.1};
    const auto kernel = boxcar_kernel();
    const auto eq = compute_equilibria(grid, params, kernel);
    const auto lk = build_lyapunov_kernels(kernel, eq.eta0);

    std::vector<double> S2 = eq.S0;
    for (auto& s : S2) s *= 2.0;
    const auto state = warm_constant_state(S2, 0.0, kernel);
    double expected = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        expected += grid[j].weight * eq.S0[j] * convexity_gauge(2.0);
    CHECK(eval_U(state, eq, lk, grid) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("U positive away from the equilibrium in both arguments") {
    const auto grid = one_class(0.1);
    const ModelParams params{0.1};
    const auto kernel = boxcar_kernel();
    const auto eq = compute_equilibria(grid, params, kernel);
    const auto lk = build_lyapunov_kernels(kernel, eq.eta0);

    CHECK(eval_U(warm_constant_state({1.2}, 0.0, kernel), eq, lk, grid) > 0.0);
    CHECK(eval_U(warm_constant_state({1.0}, 1e-6, kernel), eq, lk, grid) > 0.0);
}

TEST_CASE("dU identity at the exact threshold keeps only the quadratic term") {
    // dyadic boxcar: computed R0 is exactly 1
    const auto grid = one_class(0.1);
    const ModelParams params{0.1};
    const auto kernel = boxcar_kernel(0.25, 4.0, 1.0 / 16.0);
    const auto eq = compute_equilibria(grid, params, kernel);
    REQUIRE(eq.R0 == 1.0);
    const auto lk = build_lyapunov_kernels(kernel, eq.eta0);

    const double S = 0.83, F = 0.21;
    const auto state = warm_constant_state({S}, F, kernel);
    const double dev = 1.0 - eq.S0[0] / S;
    CHECK(eval_dU_analytic(state, eq, grid, params) ==
          doctest::Approx(-params.mu * S * dev * dev).epsilon(1e-14));
}

TEST_CASE("dU identity certifies instability of P0 for R0 > 1") {
    const auto grid = one_class(0.1);
    const ModelParams params{0.1};
    const auto kernel = boxcar_kernel(); // R0 = 2
    const auto eq = compute_equilibria(grid, params, kernel);
    const double f = 0.004;
    const auto state = warm_constant_state(eq.S0, f, kernel);
    CHECK(eval_dU_analytic(state, eq, grid, params) ==
          doctest::Approx((eq.R0 - 1.0) * f * eq.eta0).epsilon(1e-13));
    CHECK(eval_dU_analytic(state, eq, grid, params) > 0.0);
}

TEST_CASE("W vanishes at the endemic equilibrium") {
    const EndemicFixture fx;
    const auto& en = *fx.eq.endemic;
    const auto state = warm_constant_state(en.Sbar, en.Fbar, fx.kernel);
    CHECK(std::abs(eval_W(state, fx.eq, fx.lk, fx.grid)) < 1e-15);
    CHECK(std::abs(eval_dW_bound(state, fx.eq, fx.kernel, fx.grid, fx.params)) < 1e-12);
}

TEST_CASE("W with a uniformly doubled force history") {
    const EndemicFixture fx;
    const auto& en = *fx.eq.endemic;
    const auto state = warm_constant_state(en.Sbar, 2.0 * en.Fbar, fx.kernel);

    // second term = g(2) * sum_j w_j vbar_j * quad(kappa); first term 0
    double quad_kappa = quad_trapezoid(fx.lk.kappa, fx.kernel.delta());
    double expected = 0.0;
    for (std::size_t j = 0; j < fx.grid.size(); ++j)
        expected += fx.grid[j].weight * en.vbar[j];
    expected *= convexity_gauge(2.0) * quad_kappa;
    CHECK(eval_W(state, fx.eq, fx.lk, fx.grid) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("W refuses boundary and non-warm states") {
    const EndemicFixture fx;
    const auto& en = *fx.eq.endemic;

    // zero force on one slot, even the zero-weighted oldest one
    std::vector<double> S_rows(fx.kernel.slots() * 2);
    for (std::size_t k = 0; k < fx.kernel.slots(); ++k)
        for (std::size_t j = 0; j < 2; ++j) S_rows[k * 2 + j] = en.Sbar[j];
    std::vector<double> F_slots(fx.kernel.slots(), en.Fbar);
    F_slots[fx.kernel.last()] = 0.0;
    const auto boundary = HistoryState::from_slots(std::move(S_rows), std::move(F_slots), 2,
                                                   fx.kernel.delta(), fx.kernel.tau_bar());
    CHECK_THROWS_AS(eval_W(boundary, fx.eq, fx.lk, fx.grid), DomainError);

    const auto cold =
        HistoryState::from_initial(constant_ic({en.Sbar[0], en.Sbar[1]}, en.Fbar), 2, fx.kernel);
    CHECK_THROWS_AS(eval_W(cold, fx.eq, fx.lk, fx.grid), DomainError);
}

TEST_CASE("G of a zero-force history vanishes") {
    const auto kernel = boxcar_kernel();
    const auto state = warm_constant_state({1.0, 2.0}, 0.0, kernel);
    std::vector<double> G(2);
    eval_G(state, kernel, G);
    CHECK(G[0] == 0.0);
    CHECK(G[1] == 0.0);
}

TEST_CASE("G satisfies the endemic fixed-point identity") {
    const EndemicFixture fx;
    const auto& en = *fx.eq.endemic;
    const auto state = warm_constant_state(en.Sbar, en.Fbar, fx.kernel);
    std::vector<double> G(2);
    eval_G(state, fx.kernel, G);
    double weighted = 0.0;
    for (std::size_t j = 0; j < 2; ++j)
        weighted += fx.grid[j].weight * fx.grid[j].eta * G[j];
    CHECK(weighted == doctest::Approx(en.Fbar).epsilon(1e-9));
}

TEST_CASE("G matches the explicit renewal sum for one class") {
    // hat kernel has A(0) = 0, so the next-step force is exactly w*eta*G at
    // a constant history
    const auto grid = one_class(0.1, 1.4, 0.8);
    const auto kernel = sample_kernel(Table{{{0.0, 0.0}, {1.0, 2.0}, {2.0, 0.0}}}, GridSpec{0.25});
    const auto state = warm_constant_state({0.9}, 0.3, kernel);
    std::vector<double> G(1);
    eval_G(state, kernel, G);
    const std::vector<double> S_now{0.9};
    CHECK(force_of_infection(state, grid, kernel, S_now) ==
          doctest::Approx(0.8 * 1.4 * G[0]).epsilon(1e-13));
}

TEST_CASE("dW bound at a doubled force is zero by the endemic identity") {
    // At S = Sbar, F = 2 Fbar the convolution gives etabar*G/(F*Sbar) = 1,
    // so all three non-positive contributions vanish.
    const EndemicFixture fx;
    const auto& en = *fx.eq.endemic;
    const auto state = warm_constant_state(en.Sbar, 2.0 * en.Fbar, fx.kernel);
    const double bound = eval_dW_bound(state, fx.eq, fx.kernel, fx.grid, fx.params);
    CHECK(bound <= 0.0);
    CHECK(std::abs(bound) < 1e-12);
}

TEST_CASE("dW bound is non-positive on random interior states") {
    const EndemicFixture fx;
    std::mt19937 rng(88);
    std::uniform_real_distribution<double> s_dist(0.05, 1.5);
    std::uniform_real_distribution<double> f_dist(0.001, 0.8);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> S_rows(fx.kernel.slots() * 2);
        std::vector<double> F_slots(fx.kernel.slots());
        for (auto& s : S_rows) s = s_dist(rng);
        for (auto& f : F_slots) f = f_dist(rng);
        const auto state = HistoryState::from_slots(std::move(S_rows), std::move(F_slots), 2,
                                                    fx.kernel.delta(), fx.kernel.tau_bar());
        CHECK(eval_dW_bound(state, fx.eq, fx.kernel, fx.grid, fx.params) <= 0.0);
    }
}

TEST_CASE("jensen inequality holds discretely") {
    const EndemicFixture fx;
    std::mt19937 rng(1312);
    std::uniform_real_distribution<double> s_dist(0.1, 1.2);
    std::uniform_real_distribution<double> f_dist(0.01, 0.6);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> S_rows(fx.kernel.slots() * 2);
        std::vector<double> F_slots(fx.kernel.slots());
        for (auto& s : S_rows) s = s_dist(rng);
        for (auto& f : F_slots) f = f_dist(rng);
        const auto state = HistoryState::from_slots(std::move(S_rows), std::move(F_slots), 2,
                                                    fx.kernel.delta(), fx.kernel.tau_bar());
        for (double gap : jensen_gaps(state, fx.eq, fx.kernel, fx.grid))
            CHECK(gap <= 1e-8);
    }
}

TEST_CASE("combined sample agrees with the individual evaluators") {
    const EndemicFixture fx;
    const auto& en = *fx.eq.endemic;
    const auto state = warm_constant_state({0.4, 0.3}, 0.7 * en.Fbar, fx.kernel);
    const auto s = eval_sample(state, fx.eq, fx.lk, fx.kernel, fx.grid, fx.params, true);
    CHECK(s.U == eval_U(state, fx.eq, fx.lk, fx.grid));
    CHECK(s.dU_analytic == eval_dU_analytic(state, fx.eq, fx.grid, fx.params));
    CHECK(s.W == eval_W(state, fx.eq, fx.lk, fx.grid));
    CHECK(s.dW_bound == eval_dW_bound(state, fx.eq, fx.kernel, fx.grid, fx.params));
    std::vector<double> G(2);
    eval_G(state, fx.kernel, G);
    REQUIRE(s.G.size() == 2);
    CHECK(s.G[0] == G[0]);
    CHECK(s.G[1] == G[1]);
}

TEST_CASE("recorder can attach the per-class convolution columns") {
    const auto grid = one_class(0.1);
    const ModelParams params{0.1};
    const auto kernel = boxcar_kernel(0.5, 4.0, 0.25);
    const auto eq = compute_equilibria(grid, params, kernel);
    const auto lk = build_lyapunov_kernels(kernel, eq.eta0, eq.endemic->etabar);

    SimulateOptions opt;
    opt.observers.push_back(
        make_lyapunov_recorder(eq, lk, kernel, grid, params, true, true, /*record_G=*/true));
    const auto rec = simulate(constant_ic({0.5}, 0.05), grid, params, kernel, 20.0, opt);
    REQUIRE(rec.G.size() == rec.rows() * rec.m);
    REQUIRE(rec.warm_row.has_value());
    CHECK(std::isnan(rec.G[*rec.warm_row - 1]));
    CHECK(std::isfinite(rec.G[*rec.warm_row]));
}

TEST_CASE("monitor on a resting trajectory reports nothing") {
    const auto grid = one_class(0.1);
    const ModelParams params{0.1};
    const auto kernel = boxcar_kernel(0.4); // R0 = 1.6 ... at rest at P0 regardless
    const auto eq = compute_equilibria(grid, params, kernel);
    const auto lk = build_lyapunov_kernels(kernel, eq.eta0);

    SimulateOptions opt;
    opt.observers.push_back(
        make_lyapunov_recorder(eq, lk, kernel, grid, params, true, false));
    const auto rec = simulate(constant_ic(eq.S0, 0.0), grid, params, kernel, 20.0, opt);
    const auto rep = monotonicity_monitor(rec, 10.0);
    CHECK(rep.U_checked);
    CHECK(rep.violations_U == 0);
    CHECK(rep.max_fd_U == 0.0);
    CHECK(rep.max_abs_fd_minus_dU == 0.0);
}

TEST_CASE("monitor certifies decay below threshold and refines second order") {
    const auto grid = one_class(0.1);
    const ModelParams params{0.1};

    // S_init = 1/integral(A) makes the initial window renewal-consistent, so
    // the force has no jump at turn-on and the difference quotient of U
    // tracks the analytic identity at second order.
    auto run_error = [&](double delta) {
        const auto kernel = boxcar_kernel(0.2, 4.0, delta); // R0 = 0.8
        const auto eq = compute_equilibria(grid, params, kernel);
        const auto lk = build_lyapunov_kernels(kernel, eq.eta0);
        SimulateOptions opt;
        opt.observers.push_back(
            make_lyapunov_recorder(eq, lk, kernel, grid, params, true, false));
        const auto rec = simulate(constant_ic({1.25}, 0.05), grid, params, kernel, 30.0, opt);
        const auto rep = monotonicity_monitor(rec, 10.0);
        CHECK(rep.violations_U == 0);
        return rep.max_abs_fd_minus_dU;
    };

    const double e1 = run_error(0.1);
    const double e2 = run_error(0.05);
    CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("monitor tracks W against its bound above threshold") {
    const auto grid = one_class(0.1);
    const ModelParams params{0.1};
    const auto kernel = boxcar_kernel(0.5, 4.0, 0.05); // R0 = 2
    const auto eq = compute_equilibria(grid, params, kernel);
    REQUIRE(eq.endemic.has_value());
    const auto lk = build_lyapunov_kernels(kernel, eq.eta0, eq.endemic->etabar);

    SimulateOptions opt;
    opt.observers.push_back(
        make_lyapunov_recorder(eq, lk, kernel, grid, params, true, true));
    const auto rec = simulate(constant_ic({0.7}, 0.02), grid, params, kernel, 60.0, opt);
    REQUIRE(!rec.W.empty());

    const auto rep = monotonicity_monitor(rec, 10.0);
    CHECK(rep.W_checked);
    CHECK(rep.violations_W == 0);
    CHECK(rep.max_fd_W_minus_bound <= rep.tol);
    for (double b : rec.dW_bound)
        if (std::isfinite(b)) CHECK(b <= 0.0);
    // NaN before warm, numbers afterwards
    REQUIRE(rec.warm_row.has_value());
    CHECK(std::isnan(rec.W[*rec.warm_row - 1]));
    CHECK(std::isfinite(rec.W[*rec.warm_row]));
    CHECK(rec.U.size() == rec.rows());
    CHECK(rec.W.size() == rec.rows());
}
