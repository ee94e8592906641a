#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "renewal/equilibria.hpp"
#include "renewal/history.hpp"
#include "renewal/simulator.hpp"
#include "renewal/types.hpp"

namespace renewal {

/// One evaluation of the Lyapunov diagnostics at a warm state. W-side fields
/// are NaN when no endemic equilibrium applies.
struct LyapunovSample {
    double t = 0.0;
    double U = std::numeric_limits<double>::quiet_NaN();
    double dU_analytic = std::numeric_limits<double>::quiet_NaN();
    double W = std::numeric_limits<double>::quiet_NaN();
    double dW_bound = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> G; // per-class renewal convolution
};

/// Infection-free functional: gauge distance of S(t) from S0 plus the
/// xi-weighted renewal load of the window. Requires a warm state.
double eval_U(const HistoryState& state, const EquilibriumSet& eq, const LyapunovKernels& kernels,
              const SigmaGrid& grid, int threads = 1);

/// Exact continuum value of dU/dt at the current state.
double eval_dU_analytic(const HistoryState& state, const EquilibriumSet& eq,
                        const SigmaGrid& grid, const ModelParams& params);

/// Endemic functional. Requires a warm state with every F slot positive.
double eval_W(const HistoryState& state, const EquilibriumSet& eq, const LyapunovKernels& kernels,
              const SigmaGrid& grid, int threads = 1);

/// G_j = quadrature over the window of A(tau) F(t-tau) S(t-tau, j).
void eval_G(const HistoryState& state, const InfectivityKernel& kernel, std::span<double> out,
            int threads = 1);

/// Upper bound on dW/dt: a sum of non-positive terms, zero only at the
/// endemic equilibrium. Requires a warm state with F(t) > 0.
double eval_dW_bound(const HistoryState& state, const EquilibriumSet& eq,
                     const InfectivityKernel& kernel, const SigmaGrid& grid,
                     const ModelParams& params, int threads = 1);

/// Per-class gap (lhs - rhs) of the discrete Jensen inequality
///   etabar * quad(A log(FS/(Fbar Sbar_j))) <= log(etabar G_j / (Fbar Sbar_j)).
/// Non-positive up to quadrature tolerance on interior states.
std::vector<double> jensen_gaps(const HistoryState& state, const EquilibriumSet& eq,
                                const InfectivityKernel& kernel, const SigmaGrid& grid,
                                int threads = 1);

LyapunovSample eval_sample(const HistoryState& state, const EquilibriumSet& eq,
                           const LyapunovKernels& kernels, const InfectivityKernel& kernel,
                           const SigmaGrid& grid, const ModelParams& params, bool with_W,
                           int threads = 1);

/// Monotone-decrease report over a recorded trajectory. Finite differences
/// of U and W across warm rows are flagged when they exceed tol = C_tol *
/// delta^2; the U difference quotient is also compared against the analytic
/// identity averaged over the interval endpoints.
struct MonitorReport {
    double tol = 0.0;
    std::size_t intervals = 0;
    bool U_checked = false;
    bool W_checked = false;
    std::size_t violations_U = 0;
    std::size_t violations_W = 0;
    double max_fd_U = -std::numeric_limits<double>::infinity();
    double max_fd_W = -std::numeric_limits<double>::infinity();
    double max_abs_fd_minus_dU = 0.0;
    /// max over intervals of FD(W) - avg dW_bound; <= tol when the discrete
    /// Jensen direction holds.
    double max_fd_W_minus_bound = -std::numeric_limits<double>::infinity();

    bool clean() const noexcept { return violations_U == 0 && violations_W == 0; }
};

MonitorReport monotonicity_monitor(const TrajectoryRecord& rec, double C_tol);

/// Observer that appends U/dU (and W/dW_bound/G when endemic data is given)
/// columns to the record; NaN before the state is warm.
StepObserver make_lyapunov_recorder(const EquilibriumSet& eq, const LyapunovKernels& kernels,
                                    const InfectivityKernel& kernel, const SigmaGrid& grid,
                                    const ModelParams& params, bool record_U, bool record_W,
                                    bool record_G = false, int threads = 1);

} // namespace renewal
