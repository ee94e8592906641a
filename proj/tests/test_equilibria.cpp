#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "renewal/equilibria.hpp"
#include "renewal/errors.hpp"

using namespace renewal;
using namespace testutil;

TEST_CASE("infection-free equilibrium") {
    {
        const auto [S0, eta0] = infection_free(one_class(0.1), ModelParams{0.1});
        CHECK(S0[0] == 1.0);
        CHECK(eta0 == 1.0);
    }
    {
        const auto [S0, eta0] = infection_free(two_class_example(), ModelParams{0.1});
        CHECK(S0[0] == 0.5);
        CHECK(S0[1] == 0.5);
        CHECK(eta0 == doctest::Approx(1.5).epsilon(1e-15));
    }
}

TEST_CASE("eta0 invariant under eta*c, lambda/c rescaling") {
    const double c = 3.7;
    const SigmaGrid a({{1.0, 1.0, 0.06}, {0.5, 2.0, 0.1}});
    const SigmaGrid b({{1.0, 1.0 * c, 0.06 / c}, {0.5, 2.0 * c, 0.1 / c}});
    const auto [S0a, eta0a] = infection_free(a, ModelParams{0.1});
    const auto [S0b, eta0b] = infection_free(b, ModelParams{0.1});
    CHECK(eta0a == doctest::Approx(eta0b).epsilon(1e-14));
}

TEST_CASE("basic reproduction number") {
    const auto boxcar = boxcar_kernel(); // mass 2
    CHECK(basic_reproduction_number(1.0, boxcar) == 2.0);

    const InfectivityKernel zero({0.0, 0.0, 0.0}, 0.5);
    CHECK(basic_reproduction_number(1.0, zero) == 0.0);

    // homogeneous case: R0 = (total S0) * integral(A)
    const SigmaGrid grid({{1.0, 1.0, 0.03}, {2.0, 1.0, 0.02}});
    const auto [S0, eta0] = infection_free(grid, ModelParams{0.1});
    double total_S0 = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) total_S0 += grid[j].weight * S0[j];
    CHECK(basic_reproduction_number(eta0, boxcar) ==
          doctest::Approx(total_S0 * boxcar.total_mass()).epsilon(1e-14));
}

TEST_CASE("endemic equation right-hand side") {
    const auto grid = one_class(0.1);
    const ModelParams params{0.1};
    const auto kernel = boxcar_kernel(); // mass 2, R0 = 2

    CHECK(endemic_equation_rhs(0.0, grid, params, kernel) ==
          basic_reproduction_number(1.0, kernel));
    CHECK(endemic_equation_rhs(1e9, grid, params, kernel) < 1e-6);

    // one-class closed form lambda*IA/(mu + F)
    for (double F : {0.0, 0.05, 0.3, 2.0})
        CHECK(endemic_equation_rhs(F, grid, params, kernel) ==
              doctest::Approx(0.1 * 2.0 / (0.1 + F)).epsilon(1e-14));
}

TEST_CASE("rhs strictly decreasing on a log grid") {
    std::mt19937 rng(411);
    for (int trial = 0; trial < 10; ++trial) {
        const auto sc = random_scenario(rng);
        if (!(sc.kernel.total_mass() > 0.0)) continue;
        double prev = endemic_equation_rhs(0.0, sc.grid, sc.params, sc.kernel);
        for (int i = -4; i <= 4; ++i) {
            const double F = std::pow(10.0, i);
            const double cur = endemic_equation_rhs(F, sc.grid, sc.params, sc.kernel);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("endemic solve, one-class closed form") {
    // lambda = mu = 0.1, integral(A) = 2 gives R0 = 2, Fbar = lambda*IA - mu
    const auto endemic = solve_endemic(one_class(0.1), ModelParams{0.1}, boxcar_kernel());
    REQUIRE(endemic.has_value());
    CHECK(endemic->Fbar == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(endemic->Sbar[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(endemic->etabar == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(endemic->vbar[0] == doctest::Approx(0.1 * 0.5).epsilon(1e-12));
}

TEST_CASE("endemic solve, two-class quadratic root") {
    // Clearing denominators in
    //   [0.05/(0.1+F) + 0.1/(0.1+2F)] * 2 = 1
    // gives 2F^2 - 0.1F - 0.02 = 0 with positive root (0.1 + sqrt(0.17))/4.
    const double expected = (0.1 + std::sqrt(0.17)) / 4.0;
    CHECK(expected == doctest::Approx(0.1280776).epsilon(1e-6));

    const auto endemic = solve_endemic(two_class_example(), ModelParams{0.1}, boxcar_kernel());
    REQUIRE(endemic.has_value());
    CHECK(endemic->Fbar == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("endemic absent at the exact threshold") {
    // Dyadic grid makes the quadrature of the constant kernel exact, so the
    // computed R0 is exactly 1 and the equilibria coincide.
    const auto kernel = boxcar_kernel(0.25, 4.0, 1.0 / 16.0);
    const auto grid = one_class(0.1);
    const ModelParams params{0.1};
    const auto [S0, eta0] = infection_free(grid, params);
    CHECK(basic_reproduction_number(eta0, kernel) == 1.0);
    CHECK_FALSE(solve_endemic(grid, params, kernel).has_value());
}

TEST_CASE("Fbar vanishes continuously at the threshold") {
    // R0 = 1 + 1e-4
    const double h = (1.0 + 1e-4) / 4.0;
    const auto endemic = solve_endemic(one_class(0.1), ModelParams{0.1}, boxcar_kernel(h));
    REQUIRE(endemic.has_value());
    CHECK(endemic->Fbar < 1e-3);
    CHECK(endemic->Fbar > 0.0);
}

TEST_CASE("endemic existence threshold over random scenarios") {
    std::mt19937 rng(2026);
    int found = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const auto sc = random_scenario(rng);
        const auto [S0, eta0] = infection_free(sc.grid, sc.params);
        const double R0 = basic_reproduction_number(eta0, sc.kernel);
        const auto endemic = solve_endemic(sc.grid, sc.params, sc.kernel);
        CHECK(endemic.has_value() == (R0 > 1.0));
        if (!endemic) continue;
        ++found;
        CHECK(std::abs(endemic_equation_rhs(endemic->Fbar, sc.grid, sc.params, sc.kernel) - 1.0) <=
              1e-9);
        CHECK(std::abs(endemic->etabar * sc.kernel.total_mass() - 1.0) <= 1e-9);
        // depletion ordering
        for (std::size_t j = 0; j < sc.grid.size(); ++j) {
            const double s0 = sc.grid[j].lambda / sc.params.mu;
            if (sc.grid[j].eta > 0.0) {
                CHECK(endemic->Sbar[j] < s0);
                CHECK(endemic->Sbar[j] > 0.0);
            } else {
                CHECK(endemic->Sbar[j] == s0);
            }
        }
    }
    CHECK(found > 3); // the draw spans both regimes
}

TEST_CASE("compute_equilibria bundles the pieces") {
    const auto eq = compute_equilibria(two_class_example(), ModelParams{0.1}, boxcar_kernel());
    CHECK(eq.R0 == doctest::Approx(3.0).epsilon(1e-14));
    REQUIRE(eq.endemic.has_value());
    CHECK(eq.S0.size() == 2);
    CHECK(eq.eta0 == doctest::Approx(1.5).epsilon(1e-14));
}
