#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "renewal/types.hpp"

namespace renewal {

// Analytic infection-age profiles. Each family evaluates to a non-negative
// value on [0, support] and to 0 beyond; sampling realizes it on a uniform
// grid whose extent is the support rounded up to a whole number of steps.

struct Boxcar {
    double height = 0.0;
    double width = 0.0; // support; value is `height` on [0, width] inclusive

    bool operator==(const Boxcar&) const = default;
};

struct TruncatedExponential {
    double beta = 0.0;  // amplitude
    double gamma = 0.0; // decay rate
    double cutoff = 0.0;

    bool operator==(const TruncatedExponential&) const = default;
};

/// Gamma(shape, scale) probability density cut off at `cutoff` (no
/// renormalization of the removed tail). shape >= 1 so the origin is finite.
struct TruncatedGamma {
    double scale = 1.0;
    double shape = 1.0;
    double cutoff = 0.0;

    bool operator==(const TruncatedGamma&) const = default;
};

/// Piecewise-linear profile through (tau, A) points; tau strictly increasing
/// from 0. Zero beyond the last point.
struct Table {
    std::vector<std::pair<double, double>> points;

    bool operator==(const Table&) const = default;
};

using KernelFamily = std::variant<Boxcar, TruncatedExponential, TruncatedGamma, Table>;

struct GridSpec {
    double delta = 0.0;

    bool operator==(const GridSpec&) const = default;
};

void validate(const KernelFamily& family);

/// Pointwise value of the family at infection age tau (0 outside support).
double eval_family(const KernelFamily& family, double tau);

/// Natural support of the family before grid alignment.
double family_support(const KernelFamily& family);

/// Sample the family on the uniform grid, zero-padding the support up to the
/// next multiple of delta.
InfectivityKernel sample_kernel(const KernelFamily& family, const GridSpec& grid);

/// (1 + largest k with A_k > 0) * delta, capped at tau_bar; 0 for an
/// all-zero kernel.
double kernel_support(const InfectivityKernel& kernel);

} // namespace renewal
