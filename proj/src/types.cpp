#include "renewal/types.hpp"

#include <cmath>
#include <stdexcept>

#include "renewal/math.hpp"

namespace renewal {

SigmaGrid::SigmaGrid(std::vector<SusceptibilityClass> classes) : classes_(std::move(classes)) {
    if (classes_.empty()) throw std::invalid_argument("sigma grid needs at least one class");
    bool any_eta = false;
    for (std::size_t j = 0; j < classes_.size(); ++j) {
        const auto& c = classes_[j];
        if (!(c.weight > 0.0) || !std::isfinite(c.weight))
            throw std::invalid_argument("class weight must be finite and > 0");
        if (!(c.eta >= 0.0) || !std::isfinite(c.eta))
            throw std::invalid_argument("class eta must be finite and >= 0");
        if (!(c.lambda > 0.0) || !std::isfinite(c.lambda))
            throw std::invalid_argument("class lambda must be finite and > 0");
        any_eta = any_eta || c.eta > 0.0;
        total_inflow_ += c.weight * c.lambda;
    }
    if (!any_eta) throw std::invalid_argument("at least one class must have eta > 0");
    if (!std::isfinite(total_inflow_)) throw std::invalid_argument("total inflow must be finite");
}

void validate(const ModelParams& params) {
    if (!(params.mu > 0.0) || !std::isfinite(params.mu))
        throw std::invalid_argument("mu must be finite and > 0");
}

InfectivityKernel::InfectivityKernel(std::vector<double> samples, double delta)
    : samples_(std::move(samples)), delta_(delta) {
    if (samples_.size() < 2) throw std::invalid_argument("kernel needs at least 2 samples");
    if (!(delta_ > 0.0) || !std::isfinite(delta_))
        throw std::invalid_argument("kernel delta must be finite and > 0");
    for (double a : samples_)
        if (!(a >= 0.0) || !std::isfinite(a))
            throw std::invalid_argument("kernel samples must be finite and >= 0");
    tau_bar_ = static_cast<double>(last()) * delta_;
    total_mass_ = quad_trapezoid(samples_, delta_);
}

LyapunovKernels build_lyapunov_kernels(const InfectivityKernel& kernel, double eta0,
                                       std::optional<double> etabar) {
    if (!(eta0 > 0.0)) throw std::invalid_argument("eta0 must be > 0");
    if (etabar && !(*etabar > 0.0)) throw std::invalid_argument("etabar must be > 0");

    const auto tail = trapezoid_tail(kernel.samples(), kernel.delta());
    LyapunovKernels out;
    out.xi.resize(tail.size());
    for (std::size_t k = 0; k < tail.size(); ++k) out.xi[k] = eta0 * tail[k];
    if (etabar) {
        out.kappa.resize(tail.size());
        for (std::size_t k = 0; k < tail.size(); ++k) out.kappa[k] = *etabar * tail[k];
    }
    return out;
}

} // namespace renewal
