#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "renewal/errors.hpp"

namespace renewal {

// Arguments this far below 1 are treated as having left the admissible
// region rather than being clamped; the gauge is only used on interior
// states where its argument is bounded away from 0.
inline constexpr double gauge_min_arg = 1e-300;

// Convexity gauge x - 1 - log x: non-negative, zero only at x = 1.
// Non-throwing form; returns +inf for arguments outside the domain so
// that sums containing it can be range-checked after the fact.
inline double convexity_gauge_unchecked(double x) noexcept {
    if (!(x >= gauge_min_arg)) return std::numeric_limits<double>::infinity();
    return x - 1.0 - std::log(x);
}

inline double convexity_gauge(double x) {
    const double v = convexity_gauge_unchecked(x);
    if (!std::isfinite(v)) throw DomainError("convexity gauge argument outside (0, inf)");
    return v;
}

// Weight of node k in the composite trapezoid rule over nodes 0..last.
inline double trapezoid_weight(std::size_t k, std::size_t last, double delta) noexcept {
    return (k == 0 || k == last) ? 0.5 * delta : delta;
}

inline double quad_trapezoid(std::span<const double> samples, double delta) {
    if (samples.size() < 2) throw std::invalid_argument("quad_trapezoid needs at least 2 samples");
    const std::size_t last = samples.size() - 1;
    double acc = 0.5 * delta * (samples[0] + samples[last]);
    for (std::size_t k = 1; k < last; ++k) acc += delta * samples[k];
    return acc;
}

// Backward-accumulated trapezoid tails T[k] = integral of f over [k*delta, last*delta].
// T[last] is 0 bit-exactly and consecutive differences recover single panels.
inline std::vector<double> trapezoid_tail(std::span<const double> samples, double delta) {
    if (samples.size() < 2) throw std::invalid_argument("trapezoid_tail needs at least 2 samples");
    std::vector<double> tail(samples.size());
    const std::size_t last = samples.size() - 1;
    tail[last] = 0.0;
    for (std::size_t k = last; k-- > 0;)
        tail[k] = tail[k + 1] + 0.5 * delta * (samples[k] + samples[k + 1]);
    return tail;
}

} // namespace renewal
