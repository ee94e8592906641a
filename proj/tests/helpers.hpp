#pragma once

// Shared builders for the test suites.

#include <random>
#include <vector>

#include "renewal/discretization.hpp"
#include "renewal/history.hpp"
#include "renewal/types.hpp"

namespace testutil {

inline renewal::SigmaGrid one_class(double lambda = 0.1, double eta = 1.0, double w = 1.0) {
    return renewal::SigmaGrid({{w, eta, lambda}});
}

inline renewal::SigmaGrid two_class_example() {
    return renewal::SigmaGrid({{1.0, 1.0, 0.05}, {1.0, 2.0, 0.05}});
}

inline renewal::InfectivityKernel boxcar_kernel(double height = 0.5, double width = 4.0,
                                                double delta = 0.5) {
    return renewal::sample_kernel(renewal::Boxcar{height, width}, renewal::GridSpec{delta});
}

inline renewal::InitialCondition constant_ic(std::vector<double> S, double F) {
    return {renewal::ConstantProfile{std::move(S)}, renewal::ConstantProfile{{F}}};
}

struct RandomScenario {
    renewal::SigmaGrid grid;
    renewal::ModelParams params;
    renewal::InfectivityKernel kernel;
};

inline RandomScenario random_scenario(std::mt19937& rng) {
    std::uniform_int_distribution<int> m_dist(1, 5);
    std::uniform_real_distribution<double> w_dist(0.1, 2.0);
    std::uniform_real_distribution<double> eta_dist(0.0, 3.0);
    std::uniform_real_distribution<double> lam_dist(0.01, 1.0);
    std::uniform_real_distribution<double> mu_dist(0.02, 1.0);
    std::uniform_real_distribution<double> a_dist(0.0, 2.0);
    std::uniform_int_distribution<int> k_dist(4, 40);
    std::uniform_real_distribution<double> delta_dist(0.05, 0.5);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    const int m = m_dist(rng);
    std::vector<renewal::SusceptibilityClass> classes;
    for (int j = 0; j < m; ++j) {
        double eta = eta_dist(rng);
        if (coin(rng) < 0.2) eta = 0.0; // occasional insusceptible class
        if (j == m - 1) {
            bool any = eta > 0.0;
            for (const auto& c : classes) any = any || c.eta > 0.0;
            if (!any) eta = eta_dist(rng) + 0.1;
        }
        classes.push_back({w_dist(rng), eta, lam_dist(rng)});
    }

    const int K = k_dist(rng);
    std::vector<double> samples(K + 1);
    for (auto& a : samples) a = a_dist(rng);

    return {renewal::SigmaGrid(std::move(classes)), renewal::ModelParams{mu_dist(rng)},
            renewal::InfectivityKernel(std::move(samples), delta_dist(rng))};
}

} // namespace testutil
