#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "core/quadrature.hpp"

using namespace tpk;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    for (int n : {1, 2, 3, 5, 8, 16}) {
        for (int k = 0; k <= 2 * n - 1; ++k) {
            const double value = integrate([k](double t) { return std::pow(t, k); }, 0.0, 1.0, n);
            CHECK(value == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("node weights sum to the interval length") {
    const QuadRule rule = gauss_legendre(12);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("composite rule handles smooth integrands") {
    const double value =
        integrate_composite([](double t) { return std::exp(t); }, 0.0, 2.0, 8, 4);
    CHECK(value == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(gauss_legendre(0), invalid_input);
    CHECK_THROWS_AS(integrate_composite([](double) { return 0.0; }, 0.0, 1.0, 4, 0),
                    invalid_input);
}
