#pragma once

// History-slot reduction kernels shared by the force-of-infection solve and
// the Lyapunov evaluators. Sums are accumulated per fixed-size block and the
// block partials are combined in index order, so a result is bit-identical
// for any thread count (including the serial fallback when OpenMP is off).
// A plain-loop serial reference for each entry point lives in reference.hpp.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "renewal/math.hpp"

namespace renewal::kernels {

inline constexpr std::size_t block_size = 1024;

/// Read-only view of the sliding history window: slot k holds the state of
/// age k*delta (k = 0 newest), resolved through the ring head.
struct HistoryView {
    const double* S = nullptr; // cap rows of m values, physical order
    const double* F = nullptr; // cap values, physical order
    std::size_t head = 0;      // physical row of the age-0 slot
    std::size_t cap = 0;       // number of slots (K + 1)
    std::size_t m = 0;         // classes per slot

    const double* s_row(std::size_t k) const noexcept {
        std::size_t p = head + k;
        if (p >= cap) p -= cap;
        return S + p * m;
    }
    double f(std::size_t k) const noexcept {
        std::size_t p = head + k;
        if (p >= cap) p -= cap;
        return F[p];
    }
};

/// Deterministic blocked sum of term(k) over k in [0, n).
template <class Term>
double block_sum(std::size_t n, int threads, Term&& term) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + block_size - 1) / block_size;
    if (nblocks == 1) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += term(k);
        return acc;
    }
    std::vector<double> partial(nblocks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
#endif
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * block_size;
        const std::size_t hi = lo + block_size < n ? lo + block_size : n;
        double acc = 0.0;
        for (std::size_t k = lo; k < hi; ++k) acc += term(k);
        partial[static_cast<std::size_t>(b)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

/// sum_{k<n} u[k] * F(k) * sum_j q[j] * S(k,j)
inline double history_scalar(const HistoryView& h, std::span<const double> u,
                             std::span<const double> q, std::size_t n, int threads) {
    return block_sum(n, threads, [&](std::size_t k) {
        const double uk = u[k];
        if (uk == 0.0) return 0.0;
        const double* s = h.s_row(k);
        double dot = 0.0;
        for (std::size_t j = 0; j < h.m; ++j) dot += q[j] * s[j];
        return uk * h.f(k) * dot;
    });
}

/// out[j] = sum_{k<n} u[k] * F(k) * S(k,j)
inline void history_per_class(const HistoryView& h, std::span<const double> u, std::size_t n,
                              int threads, std::span<double> out) {
    for (std::size_t j = 0; j < h.m; ++j)
        out[j] = block_sum(n, threads, [&, j](std::size_t k) {
            return u[k] * h.f(k) * h.s_row(k)[j];
        });
}

/// sum_{k<n} u[k] * sum_j r[j] * gauge(F(k) * S(k,j) * scale[j]).
/// Out-of-domain gauge arguments propagate as +inf/NaN; callers check.
inline double history_gauge_scalar(const HistoryView& h, std::span<const double> u,
                                   std::span<const double> r, std::span<const double> scale,
                                   std::size_t n, int threads) {
    return block_sum(n, threads, [&](std::size_t k) {
        const double uk = u[k];
        if (uk == 0.0) return 0.0;
        const double fk = h.f(k);
        const double* s = h.s_row(k);
        double acc = 0.0;
        for (std::size_t j = 0; j < h.m; ++j)
            acc += r[j] * convexity_gauge_unchecked(fk * s[j] * scale[j]);
        return uk * acc;
    });
}

/// out[j] = sum_{k<n} u[k] * log(F(k) * S(k,j) * scale[j])
inline void history_log_per_class(const HistoryView& h, std::span<const double> u,
                                  std::span<const double> scale, std::size_t n, int threads,
                                  std::span<double> out) {
    for (std::size_t j = 0; j < h.m; ++j)
        out[j] = block_sum(n, threads, [&, j](std::size_t k) {
            const double uk = u[k];
            if (uk == 0.0) return 0.0;
            return uk * std::log(h.f(k) * h.s_row(k)[j] * scale[j]);
        });
}

} // namespace renewal::kernels
