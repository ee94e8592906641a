#pragma once

#include <optional>
#include <vector>

#include "renewal/types.hpp"

namespace renewal {

struct EndemicEquilibrium {
    double Fbar = 0.0;           // endemic force of infection
    std::vector<double> Sbar;    // susceptibles per class
    double etabar = 0.0;         // mean susceptibility at the endemic state
    std::vector<double> vbar;    // incidence density eta_j * Fbar * Sbar_j

    bool operator==(const EndemicEquilibrium&) const = default;
};

struct EquilibriumSet {
    std::vector<double> S0; // infection-free susceptibles lambda_j / mu
    double eta0 = 0.0;      // mean susceptibility at the infection-free state
    double R0 = 0.0;
    std::optional<EndemicEquilibrium> endemic; // present exactly when R0 > 1
};

struct SolverTols {
    double rel_tol = 1e-12;     // bisection width relative tolerance
    double identity_tol = 1e-9; // |etabar * integral(A) - 1| at the solution
    int max_iter = 200;

    bool operator==(const SolverTols&) const = default;
};

/// S0_j = lambda_j / mu and eta0 = sum_j w_j eta_j S0_j.
std::pair<std::vector<double>, double> infection_free(const SigmaGrid& grid,
                                                      const ModelParams& params);

double basic_reproduction_number(double eta0, const InfectivityKernel& kernel);

/// [sum_j w_j eta_j lambda_j / (mu + eta_j F)] * integral(A).
/// Equals R0 at F = 0 and is strictly decreasing in F.
double endemic_equation_rhs(double F, const SigmaGrid& grid, const ModelParams& params,
                            const InfectivityKernel& kernel);

/// Unique endemic equilibrium, absent when R0 <= 1. Bracketing by doubling
/// followed by bisection; the solution is checked against the identity
/// etabar * integral(A) = 1.
std::optional<EndemicEquilibrium> solve_endemic(const SigmaGrid& grid, const ModelParams& params,
                                                const InfectivityKernel& kernel,
                                                const SolverTols& tols = {});

EquilibriumSet compute_equilibria(const SigmaGrid& grid, const ModelParams& params,
                                  const InfectivityKernel& kernel, const SolverTols& tols = {});

} // namespace renewal
