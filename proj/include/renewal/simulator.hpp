#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "renewal/history.hpp"
#include "renewal/types.hpp"

namespace renewal {

enum class Region { Interior, Boundary };

/// Per-step time series of a simulation. Base columns are always filled;
/// observer-managed columns stay empty unless a recorder was attached and
/// hold NaN on rows where their quantity is not defined (non-warm states).
struct TrajectoryRecord {
    std::size_t m = 0;
    double delta = 0.0;
    double tau_bar = 0.0;
    std::optional<std::size_t> warm_row; // first row with a warm state

    std::vector<double> t;
    std::vector<double> F;
    std::vector<double> S; // row-major, rows() x m

    std::vector<double> U, dU_analytic;
    std::vector<double> W, dW_bound;
    std::vector<double> G; // row-major, rows() x m when recorded

    std::size_t rows() const noexcept { return t.size(); }
    std::span<const double> s_row(std::size_t i) const noexcept { return {S.data() + i * m, m}; }
};

/// Called after the base columns of a row are appended; appends to any
/// extra columns it manages.
using StepObserver = std::function<void(const HistoryState&, TrajectoryRecord&)>;

struct SimulateOptions {
    int threads = 1;
    std::vector<StepObserver> observers;
};

/// Force of infection at the time one step past `history`, given the already
/// stepped susceptibles S_now. The age-0 endpoint of the renewal quadrature
/// involves the unknown itself; the resulting linear equation F = b + c*F is
/// solved exactly and requires the endpoint weight c < 1.
double force_of_infection(const HistoryState& history, const SigmaGrid& grid,
                          const InfectivityKernel& kernel, std::span<const double> S_now,
                          int threads = 1);

/// Advance one step of size delta: integrating-factor update of S holding F
/// at its left value, implicit renewal solve for the new F, then one
/// corrector pass re-stepping S with the averaged force.
void step_inplace(HistoryState& state, const SigmaGrid& grid, const ModelParams& params,
                  const InfectivityKernel& kernel, int threads = 1);

HistoryState step(HistoryState state, const SigmaGrid& grid, const ModelParams& params,
                  const InfectivityKernel& kernel, int threads = 1);

/// Interior iff some grid shift of the kernel gives the initial window a
/// positive renewal integral.
Region classify_initial(const InitialCondition& ic, const SigmaGrid& grid,
                        const InfectivityKernel& kernel);

TrajectoryRecord simulate(const InitialCondition& ic, const SigmaGrid& grid,
                          const ModelParams& params, const InfectivityKernel& kernel,
                          double t_end, const SimulateOptions& options = {});

} // namespace renewal
