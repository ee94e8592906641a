#include "renewal/equilibria.hpp"

#include <cmath>
#include <string>

#include "renewal/errors.hpp"

namespace renewal {

std::pair<std::vector<double>, double> infection_free(const SigmaGrid& grid,
                                                      const ModelParams& params) {
    validate(params);
    std::vector<double> S0(grid.size());
    double eta0 = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        S0[j] = grid[j].lambda / params.mu;
        eta0 += grid[j].weight * grid[j].eta * S0[j];
    }
    return {std::move(S0), eta0};
}

double basic_reproduction_number(double eta0, const InfectivityKernel& kernel) {
    return eta0 * kernel.total_mass();
}

double endemic_equation_rhs(double F, const SigmaGrid& grid, const ModelParams& params,
                            const InfectivityKernel& kernel) {
    double sum = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto& c = grid[j];
        sum += c.weight * c.eta * c.lambda / (params.mu + c.eta * F);
    }
    return sum * kernel.total_mass();
}

std::optional<EndemicEquilibrium> solve_endemic(const SigmaGrid& grid, const ModelParams& params,
                                                const InfectivityKernel& kernel,
                                                const SolverTols& tols) {
    validate(params);
    const auto [S0, eta0] = infection_free(grid, params);
    const double R0 = basic_reproduction_number(eta0, kernel);
    if (!(R0 > 1.0)) return std::nullopt;

    // rhs(0) = R0 > 1 and rhs is strictly decreasing to 0, so doubling from 1
    // finds an upper bracket.
    double hi = 1.0;
    int doublings = 0;
    while (endemic_equation_rhs(hi, grid, params, kernel) >= 1.0) {
        hi *= 2.0;
        if (++doublings > tols.max_iter)
            throw SolverError("endemic bracket not found after " +
                              std::to_string(tols.max_iter) + " doublings");
    }
    double lo = 0.0;
    for (int it = 0; it < tols.max_iter && (hi - lo) > tols.rel_tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (endemic_equation_rhs(mid, grid, params, kernel) > 1.0)
            lo = mid;
        else
            hi = mid;
    }

    EndemicEquilibrium eq;
    eq.Fbar = 0.5 * (lo + hi);
    eq.Sbar.resize(grid.size());
    eq.vbar.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto& c = grid[j];
        eq.Sbar[j] = c.lambda / (params.mu + c.eta * eq.Fbar);
        eq.etabar += c.weight * c.eta * eq.Sbar[j];
        eq.vbar[j] = c.eta * eq.Fbar * eq.Sbar[j];
    }

    const double identity = eq.etabar * kernel.total_mass();
    if (std::abs(identity - 1.0) > tols.identity_tol)
        throw ConsistencyError("endemic identity etabar*integral(A) = 1 violated by " +
                               std::to_string(identity - 1.0));
    return eq;
}

EquilibriumSet compute_equilibria(const SigmaGrid& grid, const ModelParams& params,
                                  const InfectivityKernel& kernel, const SolverTols& tols) {
    EquilibriumSet out;
    auto [S0, eta0] = infection_free(grid, params);
    out.S0 = std::move(S0);
    out.eta0 = eta0;
    out.R0 = basic_reproduction_number(eta0, kernel);
    out.endemic = solve_endemic(grid, params, kernel, tols);
    return out;
}

} // namespace renewal
