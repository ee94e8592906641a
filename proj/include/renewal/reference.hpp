#pragma once

// Serial reference implementations of the history reductions: one forward
// accumulator, no blocking, no threads. Kept for testing the production
// kernels and as the baseline in the kernel benchmark.

#include <cmath>
#include <cstddef>
#include <span>

#include "renewal/kernels.hpp"
#include "renewal/math.hpp"

namespace renewal::ref {

inline double history_scalar(const kernels::HistoryView& h, std::span<const double> u,
                             std::span<const double> q, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double* s = h.s_row(k);
        double dot = 0.0;
        for (std::size_t j = 0; j < h.m; ++j) dot += q[j] * s[j];
        acc += u[k] * h.f(k) * dot;
    }
    return acc;
}

inline void history_per_class(const kernels::HistoryView& h, std::span<const double> u,
                              std::size_t n, std::span<double> out) {
    for (std::size_t j = 0; j < h.m; ++j) out[j] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = u[k] * h.f(k);
        const double* s = h.s_row(k);
        for (std::size_t j = 0; j < h.m; ++j) out[j] += w * s[j];
    }
}

inline double history_gauge_scalar(const kernels::HistoryView& h, std::span<const double> u,
                                   std::span<const double> r, std::span<const double> scale,
                                   std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (u[k] == 0.0) continue;
        const double fk = h.f(k);
        const double* s = h.s_row(k);
        double inner = 0.0;
        for (std::size_t j = 0; j < h.m; ++j)
            inner += r[j] * convexity_gauge_unchecked(fk * s[j] * scale[j]);
        acc += u[k] * inner;
    }
    return acc;
}

inline void history_log_per_class(const kernels::HistoryView& h, std::span<const double> u,
                                  std::span<const double> scale, std::size_t n,
                                  std::span<double> out) {
    for (std::size_t j = 0; j < h.m; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (u[k] == 0.0) continue;
            acc += u[k] * std::log(h.f(k) * h.s_row(k)[j] * scale[j]);
        }
        out[j] = acc;
    }
}

} // namespace renewal::ref
