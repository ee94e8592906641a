#include "renewal/history.hpp"

#include <cmath>
#include <stdexcept>

namespace renewal {

namespace {

const std::vector<double>& profile_values(const Profile& p) {
    if (const auto* c = std::get_if<ConstantProfile>(&p)) return c->values;
    if (const auto* r = std::get_if<RampProfile>(&p)) return r->from;
    return std::get<PulseOldestProfile>(p).values;
}

std::size_t clamp_index(const std::vector<double>& v, std::size_t c) {
    if (v.empty()) throw std::invalid_argument("profile has no values");
    return c < v.size() ? c : v.size() - 1;
}

} // namespace

double eval_profile(const Profile& profile, std::size_t c, std::size_t k, std::size_t K) {
    if (const auto* p = std::get_if<ConstantProfile>(&profile))
        return p->values[clamp_index(p->values, c)];
    if (const auto* p = std::get_if<RampProfile>(&profile)) {
        if (p->from.size() != p->to.size())
            throw std::invalid_argument("ramp profile from/to sizes differ");
        const std::size_t i = clamp_index(p->from, c);
        const double frac = K == 0 ? 1.0 : static_cast<double>(K - k) / static_cast<double>(K);
        return p->from[i] + (p->to[i] - p->from[i]) * frac;
    }
    const auto* p = std::get_if<PulseOldestProfile>(&profile);
    return k == K ? p->values[clamp_index(p->values, c)] : 0.0;
}

HistoryState HistoryState::from_initial(const InitialCondition& ic, std::size_t classes,
                                        const InfectivityKernel& kernel) {
    // A single-value profile broadcasts over classes; otherwise sizes must match.
    const auto& sv = profile_values(ic.S);
    if (sv.size() != 1 && sv.size() != classes)
        throw std::invalid_argument("initial S profile must have 1 or m values");
    if (profile_values(ic.F).size() != 1)
        throw std::invalid_argument("initial F profile must have a single value");

    const std::size_t K = kernel.last();
    HistoryState st;
    st.m_ = classes;
    st.cap_ = K + 1;
    st.delta_ = kernel.delta();
    st.S_.resize(st.cap_ * classes);
    st.F_.resize(st.cap_);
    for (std::size_t k = 0; k <= K; ++k) {
        for (std::size_t j = 0; j < classes; ++j)
            st.S_[k * classes + j] = eval_profile(ic.S, j, k, K);
        st.F_[k] = eval_profile(ic.F, 0, k, K);
    }
    st.until_warm_ = K;
    st.warm_ = K == 0;
    st.check_invariants();
    return st;
}

HistoryState HistoryState::from_slots(std::vector<double> S_rows, std::vector<double> F,
                                      std::size_t classes, double delta, double elapsed) {
    if (classes == 0) throw std::invalid_argument("need at least one class");
    if (F.size() < 2 || S_rows.size() != F.size() * classes)
        throw std::invalid_argument("slot data sizes inconsistent");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be > 0");

    HistoryState st;
    st.m_ = classes;
    st.cap_ = F.size();
    st.delta_ = delta;
    st.S_ = std::move(S_rows);
    st.F_ = std::move(F);
    st.t_now_ = elapsed;
    st.warm_ = elapsed >= st.tau_bar();
    if (!st.warm_) {
        const double remaining = (st.tau_bar() - elapsed) / delta;
        st.until_warm_ = static_cast<std::size_t>(std::ceil(remaining - 1e-12));
    }
    st.check_invariants();
    return st;
}

void HistoryState::check_invariants() const {
    for (double s : S_)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("history S values must be finite and > 0");
    for (double f : F_)
        if (!(f >= 0.0) || !std::isfinite(f))
            throw std::invalid_argument("history F values must be finite and >= 0");
}

void HistoryState::push(std::span<const double> S_new, double F_new) {
    head_ = (head_ + cap_ - 1) % cap_;
    double* row = S_.data() + head_ * m_;
    for (std::size_t j = 0; j < m_; ++j) row[j] = S_new[j];
    F_[head_] = F_new;
    t_now_ += delta_;
    if (!warm_ && --until_warm_ == 0) warm_ = true;
}

} // namespace renewal
