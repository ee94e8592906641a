#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "renewal/discretization.hpp"

using namespace renewal;

TEST_CASE("boxcar sampling") {
    const auto k = sample_kernel(Boxcar{0.5, 4.0}, GridSpec{0.5});
    CHECK(k.last() == 8);
    for (std::size_t i = 0; i <= 8; ++i) CHECK(k.a(i) == 0.5);
    CHECK(k.tau_bar() == 4.0);
    CHECK(k.total_mass() == 2.0);
}

TEST_CASE("truncated exponential sampling") {
    const auto k = sample_kernel(TruncatedExponential{1.0, 1.0, 3.0}, GridSpec{0.5});
    CHECK(k.last() == 6);
    for (std::size_t i = 0; i <= 6; ++i)
        CHECK(k.a(i) == doctest::Approx(std::exp(-0.5 * double(i))).epsilon(1e-15));
}

TEST_CASE("truncated exponential zero-pads past the cutoff") {
    const auto k = sample_kernel(TruncatedExponential{1.0, 1.0, 2.8}, GridSpec{0.5});
    CHECK(k.last() == 6); // padded to tau_bar = 3.0
    CHECK(k.tau_bar() == 3.0);
    CHECK(k.a(5) == doctest::Approx(std::exp(-2.5)));
    CHECK(k.a(6) == 0.0);
}

TEST_CASE("table sampling of the hat profile") {
    const Table hat{{{0.0, 0.0}, {1.0, 2.0}, {2.0, 0.0}}};
    const auto k = sample_kernel(hat, GridSpec{0.25});
    CHECK(k.slots() == 9);
    CHECK(k.a(4) == 2.0); // peak at tau = 1
    CHECK(k.a(0) == 0.0);
    CHECK(k.a(8) == 0.0);
    CHECK(k.a(2) == doctest::Approx(1.0)); // linear interpolation
    CHECK(k.a(6) == doctest::Approx(1.0));
}

TEST_CASE("truncated gamma sampling is a truncated density") {
    const auto k = sample_kernel(TruncatedGamma{0.5, 3.0, 6.0}, GridSpec{0.05});
    CHECK(k.a(0) == 0.0); // shape > 1 vanishes at the origin
    // nearly full mass retained at this cutoff
    CHECK(k.total_mass() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(sample_kernel(TruncatedGamma{0.5, 0.5, 6.0}, GridSpec{0.05}),
                    std::invalid_argument);
}

TEST_CASE("kernel family validation") {
    CHECK_THROWS_AS(sample_kernel(Boxcar{-0.5, 4.0}, GridSpec{0.5}), std::invalid_argument);
    CHECK_THROWS_AS(sample_kernel(Boxcar{0.5, 0.0}, GridSpec{0.5}), std::invalid_argument);
    CHECK_THROWS_AS(sample_kernel(Boxcar{0.5, 4.0}, GridSpec{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(sample_kernel(Table{{{0.0, 1.0}}}, GridSpec{0.5}), std::invalid_argument);
    CHECK_THROWS_AS(sample_kernel(Table{{{0.5, 1.0}, {1.0, 1.0}}}, GridSpec{0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_kernel(Table{{{0.0, 1.0}, {0.0, 1.0}}}, GridSpec{0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_kernel(Table{{{0.0, 1.0}, {1.0, -1.0}}}, GridSpec{0.5}),
                    std::invalid_argument);
}

TEST_CASE("kernel support") {
    const auto zero = InfectivityKernel({0.0, 0.0, 0.0}, 0.5);
    CHECK(kernel_support(zero) == 0.0);

    const auto boxcar = sample_kernel(Boxcar{0.5, 4.0}, GridSpec{0.5});
    CHECK(kernel_support(boxcar) == 4.0); // capped at tau_bar

    const auto hat = sample_kernel(Table{{{0.0, 0.0}, {1.0, 2.0}, {2.0, 0.0}}}, GridSpec{0.25});
    CHECK(kernel_support(hat) == 2.0);
}

TEST_CASE("kernel support ignores trailing zero padding") {
    const InfectivityKernel base({0.0, 1.0, 0.5, 0.0}, 0.5);
    const double s = kernel_support(base);
    InfectivityKernel padded({0.0, 1.0, 0.5, 0.0, 0.0, 0.0}, 0.5);
    CHECK(kernel_support(padded) == s);
}

TEST_CASE("boxcar mass survives sampling and quadrature exactly") {
    for (double width : {1.0, 2.5, 4.0}) {
        for (double height : {0.25, 1.0, 3.0}) {
            const auto k = sample_kernel(Boxcar{height, width}, GridSpec{0.25});
            CHECK(k.total_mass() == doctest::Approx(height * width).epsilon(1e-15));
        }
    }
}
