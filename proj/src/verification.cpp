#include "renewal/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "renewal/equilibria.hpp"
#include "renewal/simulator.hpp"

namespace renewal {

OracleReport homogeneous_reduction_check(const SigmaGrid& grid, const ModelParams& params,
                                         const InfectivityKernel& kernel,
                                         const InitialCondition& ic, double t_end, int threads) {
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (grid[j].eta != 1.0)
            throw std::invalid_argument("homogeneous reduction requires eta == 1 everywhere");

    OracleReport rep;
    rep.name = "homogeneous_reduction";
    rep.tolerance = 1e-10;

    SimulateOptions opt;
    opt.threads = threads;
    const TrajectoryRecord full = simulate(ic, grid, params, kernel, t_end, opt);

    // Aggregate by hand: one class, unit weight, summed recruitment, and the
    // weight-summed initial susceptible profile.
    double lambda_agg = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) lambda_agg += grid[j].weight * grid[j].lambda;
    const SigmaGrid agg_grid({{1.0, 1.0, lambda_agg}});

    InitialCondition agg_ic = ic;
    auto aggregate_values = [&](const std::vector<double>& v) {
        double sum = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j)
            sum += grid[j].weight * v[std::min(j, v.size() - 1)];
        return std::vector<double>{sum};
    };
    if (auto* c = std::get_if<ConstantProfile>(&agg_ic.S)) {
        c->values = aggregate_values(c->values);
    } else if (auto* r = std::get_if<RampProfile>(&agg_ic.S)) {
        r->from = aggregate_values(r->from);
        r->to = aggregate_values(r->to);
    } else {
        throw std::invalid_argument("homogeneous reduction supports constant/ramp S profiles");
    }

    const TrajectoryRecord agg = simulate(agg_ic, agg_grid, params, kernel, t_end, opt);

    double err = 0.0;
    for (std::size_t i = 0; i < full.rows(); ++i) {
        err = std::max(err, std::abs(full.F[i] - agg.F[i]));
        double s_sum = 0.0;
        const auto row = full.s_row(i);
        for (std::size_t j = 0; j < grid.size(); ++j) s_sum += grid[j].weight * row[j];
        err = std::max(err, std::abs(s_sum - agg.s_row(i)[0]));
    }
    rep.max_abs_err = err;
    rep.pass = err <= rep.tolerance;
    return rep;
}

OracleReport closed_form_equilibrium_check(const SigmaGrid& grid, const ModelParams& params,
                                           const InfectivityKernel& kernel) {
    if (grid.size() > 2)
        throw std::invalid_argument("closed forms exist for at most two classes");

    OracleReport rep;
    rep.name = "closed_form_equilibrium";
    rep.tolerance = 1e-10;

    const auto [S0, eta0] = infection_free(grid, params);
    const double R0 = basic_reproduction_number(eta0, kernel);
    const auto solved = solve_endemic(grid, params, kernel);

    if (!(R0 > 1.0)) {
        // Below threshold both paths must agree there is nothing to solve.
        rep.max_abs_err = solved ? std::numeric_limits<double>::infinity() : 0.0;
        rep.pass = !solved;
        return rep;
    }

    const double IA = kernel.total_mass();
    const double mu = params.mu;
    double closed = 0.0;
    if (grid.size() == 1) {
        // w eta lambda IA / (mu + eta F) = 1
        const auto& c = grid[0];
        closed = (c.weight * c.eta * c.lambda * IA - mu) / c.eta;
    } else {
        // Clearing both denominators gives a F^2 + b F + c = 0 with the
        // positive root the endemic force.
        const auto& c1 = grid[0];
        const auto& c2 = grid[1];
        const double p1 = c1.weight * c1.eta * c1.lambda;
        const double p2 = c2.weight * c2.eta * c2.lambda;
        const double a = c1.eta * c2.eta;
        const double b = mu * (c1.eta + c2.eta) - IA * (p1 * c2.eta + p2 * c1.eta);
        const double c = mu * mu - IA * mu * (p1 + p2);
        if (a == 0.0) {
            // One eta vanishes; the equation is linear.
            closed = -c / b;
        } else {
            const double disc = std::sqrt(b * b - 4.0 * a * c);
            const double q = -0.5 * (b + std::copysign(disc, b));
            const double r1 = q / a;
            const double r2 = c / q;
            closed = std::max(r1, r2);
        }
    }

    rep.max_abs_err = solved ? std::abs(solved->Fbar - closed)
                             : std::numeric_limits<double>::infinity();
    rep.pass = rep.max_abs_err <= rep.tolerance;
    return rep;
}

OracleReport refinement_study(const KernelFamily& family, double base_delta,
                              const SigmaGrid& grid, const ModelParams& params,
                              const InitialCondition& ic, double t_end, int threads) {
    OracleReport rep;
    rep.name = "refinement_study";
    rep.tolerance = 1.9; // minimum observed order

    SimulateOptions opt;
    opt.threads = threads;

    struct Endpoint {
        double F;
        std::vector<double> S;
    };
    std::vector<Endpoint> ends;
    double tau_bar = -1.0;
    for (int level = 0; level < 4; ++level) {
        const double delta = base_delta / static_cast<double>(1 << level);
        const InfectivityKernel kernel = sample_kernel(family, GridSpec{delta});
        if (tau_bar < 0.0)
            tau_bar = kernel.tau_bar();
        else if (std::abs(kernel.tau_bar() - tau_bar) > 1e-12)
            throw std::invalid_argument("kernel support not grid-aligned across refinement levels");
        const TrajectoryRecord rec = simulate(ic, grid, params, kernel, t_end, opt);
        const auto row = rec.s_row(rec.rows() - 1);
        ends.push_back({rec.F.back(), {row.begin(), row.end()}});
    }

    std::vector<double> errs(3);
    for (int level = 0; level < 3; ++level) {
        double e = std::abs(ends[level].F - ends[3].F);
        for (std::size_t j = 0; j < grid.size(); ++j)
            e = std::max(e, std::abs(ends[level].S[j] - ends[3].S[j]));
        errs[level] = e;
    }
    rep.max_abs_err = *std::max_element(errs.begin(), errs.end());

    constexpr double rounding_floor = 1e-12;
    if (rep.max_abs_err <= rounding_floor) {
        rep.observed_order = std::numeric_limits<double>::infinity();
        rep.pass = true;
        return rep;
    }
    const double order01 = std::log2(errs[0] / errs[1]);
    const double order12 = std::log2(errs[1] / errs[2]);
    rep.observed_order = std::min(order01, order12);
    rep.pass = rep.observed_order >= rep.tolerance;
    return rep;
}

} // namespace renewal
