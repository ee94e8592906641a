#include "renewal/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace renewal {

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

struct Validator {
    void operator()(const Boxcar& b) const {
        if (!finite_nonneg(b.height)) throw std::invalid_argument("boxcar height must be >= 0");
        if (!(b.width > 0.0) || !std::isfinite(b.width))
            throw std::invalid_argument("boxcar width must be > 0");
    }
    void operator()(const TruncatedExponential& e) const {
        if (!finite_nonneg(e.beta)) throw std::invalid_argument("exponential beta must be >= 0");
        if (!finite_nonneg(e.gamma)) throw std::invalid_argument("exponential gamma must be >= 0");
        if (!(e.cutoff > 0.0) || !std::isfinite(e.cutoff))
            throw std::invalid_argument("exponential cutoff must be > 0");
    }
    void operator()(const TruncatedGamma& g) const {
        if (!(g.scale > 0.0) || !std::isfinite(g.scale))
            throw std::invalid_argument("gamma scale must be > 0");
        if (!(g.shape >= 1.0) || !std::isfinite(g.shape))
            throw std::invalid_argument("gamma shape must be >= 1");
        if (!(g.cutoff > 0.0) || !std::isfinite(g.cutoff))
            throw std::invalid_argument("gamma cutoff must be > 0");
    }
    void operator()(const Table& t) const {
        if (t.points.size() < 2) throw std::invalid_argument("table needs at least 2 points");
        if (t.points.front().first != 0.0)
            throw std::invalid_argument("table tau values must start at 0");
        double prev = -1.0;
        for (const auto& [tau, a] : t.points) {
            if (!std::isfinite(tau) || tau <= prev)
                throw std::invalid_argument("table tau values must be strictly increasing");
            if (!finite_nonneg(a)) throw std::invalid_argument("table values must be >= 0");
            prev = tau;
        }
    }
};

struct Evaluator {
    double tau;
    double operator()(const Boxcar& b) const { return tau <= b.width ? b.height : 0.0; }
    double operator()(const TruncatedExponential& e) const {
        return tau <= e.cutoff ? e.beta * std::exp(-e.gamma * tau) : 0.0;
    }
    double operator()(const TruncatedGamma& g) const {
        if (tau > g.cutoff) return 0.0;
        const double x = tau / g.scale;
        return std::pow(x, g.shape - 1.0) * std::exp(-x) / (g.scale * std::tgamma(g.shape));
    }
    double operator()(const Table& t) const {
        if (tau > t.points.back().first) return 0.0;
        auto it = std::lower_bound(t.points.begin(), t.points.end(), tau,
                                   [](const auto& p, double v) { return p.first < v; });
        if (it->first == tau) return it->second;
        const auto& [t1, a1] = *it;
        const auto& [t0, a0] = *std::prev(it);
        return a0 + (a1 - a0) * (tau - t0) / (t1 - t0);
    }
};

struct Support {
    double operator()(const Boxcar& b) const { return b.width; }
    double operator()(const TruncatedExponential& e) const { return e.cutoff; }
    double operator()(const TruncatedGamma& g) const { return g.cutoff; }
    double operator()(const Table& t) const { return t.points.back().first; }
};

} // namespace

void validate(const KernelFamily& family) { std::visit(Validator{}, family); }

double eval_family(const KernelFamily& family, double tau) {
    if (tau < 0.0) return 0.0;
    return std::visit(Evaluator{tau}, family);
}

double family_support(const KernelFamily& family) { return std::visit(Support{}, family); }

InfectivityKernel sample_kernel(const KernelFamily& family, const GridSpec& grid) {
    validate(family);
    if (!(grid.delta > 0.0) || !std::isfinite(grid.delta))
        throw std::invalid_argument("grid delta must be > 0");

    const double support = family_support(family);
    const double ratio = support / grid.delta;
    // Snap to the grid when the support already is a whole number of steps.
    std::size_t last = static_cast<std::size_t>(std::ceil(ratio));
    if (std::abs(ratio - std::round(ratio)) < 1e-9 * std::max(1.0, std::abs(ratio)))
        last = static_cast<std::size_t>(std::llround(ratio));
    last = std::max<std::size_t>(last, 1);

    std::vector<double> samples(last + 1);
    for (std::size_t k = 0; k <= last; ++k) {
        const double a = eval_family(family, static_cast<double>(k) * grid.delta);
        if (!(a >= 0.0) || !std::isfinite(a))
            throw std::invalid_argument("kernel family produced a negative or non-finite sample");
        samples[k] = a;
    }
    return InfectivityKernel(std::move(samples), grid.delta);
}

double kernel_support(const InfectivityKernel& kernel) {
    for (std::size_t k = kernel.slots(); k-- > 0;) {
        if (kernel.a(k) > 0.0)
            return std::min(static_cast<double>(k + 1) * kernel.delta(), kernel.tau_bar());
    }
    return 0.0;
}

} // namespace renewal
