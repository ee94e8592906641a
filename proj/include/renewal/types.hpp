#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace renewal {

/// One susceptibility class: measure weight w_j, relative susceptibility
/// eta_j and recruitment rate lambda_j.
struct SusceptibilityClass {
    double weight = 1.0;
    double eta = 1.0;
    double lambda = 0.0;

    bool operator==(const SusceptibilityClass&) const = default;
};

/// Finite weighted set of susceptibility classes. Integrals over the
/// susceptibility space are realized as weighted sums over the classes.
/// Immutable after construction.
class SigmaGrid {
public:
    explicit SigmaGrid(std::vector<SusceptibilityClass> classes);

    std::size_t size() const noexcept { return classes_.size(); }
    const SusceptibilityClass& operator[](std::size_t j) const noexcept { return classes_[j]; }
    std::span<const SusceptibilityClass> classes() const noexcept { return classes_; }

    /// Total population inflow sum_j w_j * lambda_j.
    double total_inflow() const noexcept { return total_inflow_; }

    bool operator==(const SigmaGrid& other) const { return classes_ == other.classes_; }

private:
    std::vector<SusceptibilityClass> classes_;
    double total_inflow_ = 0.0;
};

struct ModelParams {
    double mu = 0.0; // per-capita death rate, > 0

    bool operator==(const ModelParams&) const = default;
};

void validate(const ModelParams& params);

/// Infection-age profile A sampled on the uniform grid {k*delta : k = 0..K}
/// with finite support tau_bar = K*delta. Immutable after construction.
class InfectivityKernel {
public:
    InfectivityKernel(std::vector<double> samples, double delta);

    std::span<const double> samples() const noexcept { return samples_; }
    double a(std::size_t k) const noexcept { return samples_[k]; }
    double delta() const noexcept { return delta_; }
    std::size_t last() const noexcept { return samples_.size() - 1; } // K
    std::size_t slots() const noexcept { return samples_.size(); }   // K + 1
    double tau_bar() const noexcept { return tau_bar_; }

    /// Trapezoid mass integral of A over [0, tau_bar], precomputed.
    double total_mass() const noexcept { return total_mass_; }

    bool operator==(const InfectivityKernel& other) const {
        return samples_ == other.samples_ && delta_ == other.delta_;
    }

private:
    std::vector<double> samples_;
    double delta_ = 0.0;
    double tau_bar_ = 0.0;
    double total_mass_ = 0.0;
};

/// Tail integrals of the infectivity kernel scaled by the mean
/// susceptibilities: xi_k for the infection-free functional, kappa_k for
/// the endemic one (empty when no endemic equilibrium was requested).
struct LyapunovKernels {
    std::vector<double> xi;
    std::vector<double> kappa;
};

/// xi_k = eta0 * tail(A, k); kappa_k = etabar * tail(A, k) when etabar given.
LyapunovKernels build_lyapunov_kernels(const InfectivityKernel& kernel, double eta0,
                                       std::optional<double> etabar = std::nullopt);

} // namespace renewal
