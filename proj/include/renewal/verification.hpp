#pragma once

#include <string>
#include <vector>

#include "renewal/discretization.hpp"
#include "renewal/history.hpp"
#include "renewal/types.hpp"

namespace renewal {

struct OracleReport {
    std::string name;
    double max_abs_err = 0.0;
    double observed_order = 0.0; // refinement oracles only; +inf when exact
    double tolerance = 0.0;
    bool pass = false;
};

/// With eta identically 1 the class structure is dynamically irrelevant:
/// the full m-class run must match a single aggregated class with
/// lambda_agg = sum_j w_j lambda_j. Compares F and aggregated S
/// trajectories; hand-coded aggregation, tolerance 1e-10.
OracleReport homogeneous_reduction_check(const SigmaGrid& grid, const ModelParams& params,
                                         const InfectivityKernel& kernel,
                                         const InitialCondition& ic, double t_end,
                                         int threads = 1);

/// Compares the bisection Fbar against hand-coded closed forms: the linear
/// expression for one class and the positive quadratic root for two classes.
/// Tolerance 1e-10. Below threshold both paths must report no equilibrium.
OracleReport closed_form_equilibrium_check(const SigmaGrid& grid, const ModelParams& params,
                                           const InfectivityKernel& kernel);

/// Runs the scenario at step sizes {delta, delta/2, delta/4, delta/8},
/// measures the fixed-time state error against the finest grid and reports
/// the observed convergence order; pass iff order >= 1.9 (or all errors at
/// rounding level for schemes that are exact).
OracleReport refinement_study(const KernelFamily& family, double base_delta,
                              const SigmaGrid& grid, const ModelParams& params,
                              const InitialCondition& ic, double t_end, int threads = 1);

} // namespace renewal
