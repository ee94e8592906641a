#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "renewal/kernels.hpp"
#include "renewal/types.hpp"

namespace renewal {

// Initial data over the window [-tau_bar, 0], given as named profiles that
// are sampled onto whatever slot grid a simulation uses. `values` carries one
// entry per class for the susceptible profile and a single entry for the
// force profile.

struct ConstantProfile {
    std::vector<double> values;

    bool operator==(const ConstantProfile&) const = default;
};

/// Linear in history time s: `from` at s = -tau_bar, `to` at s = 0.
struct RampProfile {
    std::vector<double> from;
    std::vector<double> to;

    bool operator==(const RampProfile&) const = default;
};

/// Nonzero only on the oldest slot s = -tau_bar.
struct PulseOldestProfile {
    std::vector<double> values;

    bool operator==(const PulseOldestProfile&) const = default;
};

using Profile = std::variant<ConstantProfile, RampProfile, PulseOldestProfile>;

/// Value of the profile on slot k of K (k = K is the oldest slot), clamped
/// per-class index c into the profile's value vectors.
double eval_profile(const Profile& profile, std::size_t c, std::size_t k, std::size_t K);

struct InitialCondition {
    Profile S; // per-class values, all samples must be > 0
    Profile F; // single value,     all samples must be >= 0

    bool operator==(const InitialCondition&) const = default;
};

/// System state over the sliding window [t - tau_bar, t]: a ring of K+1
/// slots where slot k holds (S, F) at age k*delta. The state is warm once
/// elapsed simulated time reaches tau_bar.
class HistoryState {
public:
    /// Sample an initial condition onto the slot grid of `kernel`; t = 0.
    static HistoryState from_initial(const InitialCondition& ic, std::size_t classes,
                                     const InfectivityKernel& kernel);

    /// Build directly from slot data; row k of `S_rows` is the age-k slot.
    /// `elapsed` sets the warm flag (warm iff elapsed >= (rows-1)*delta).
    static HistoryState from_slots(std::vector<double> S_rows, std::vector<double> F,
                                   std::size_t classes, double delta, double elapsed);

    std::size_t classes() const noexcept { return m_; }
    std::size_t slots() const noexcept { return cap_; } // K + 1
    std::size_t last() const noexcept { return cap_ - 1; }
    double delta() const noexcept { return delta_; }
    double tau_bar() const noexcept { return static_cast<double>(last()) * delta_; }
    double t_now() const noexcept { return t_now_; }
    bool warm() const noexcept { return warm_; }

    double S(std::size_t k, std::size_t j) const noexcept { return view().s_row(k)[j]; }
    double F(std::size_t k) const noexcept { return view().f(k); }
    std::span<const double> S_now() const noexcept { return {view().s_row(0), m_}; }
    double F_now() const noexcept { return F(0); }

    kernels::HistoryView view() const noexcept { return {S_.data(), F_.data(), head_, cap_, m_}; }

    /// Drop the oldest slot and insert (S_new, F_new) as the new age-0 slot;
    /// advances time by delta and updates the warm flag.
    void push(std::span<const double> S_new, double F_new);

private:
    HistoryState() = default;
    void check_invariants() const;

    std::vector<double> S_; // cap rows of m values, physical order
    std::vector<double> F_; // cap values, physical order
    std::size_t head_ = 0;
    std::size_t cap_ = 0;
    std::size_t m_ = 0;
    double delta_ = 0.0;
    double t_now_ = 0.0;
    std::size_t until_warm_ = 0; // pushes left before the window is self-generated
    bool warm_ = false;
};

} // namespace renewal
