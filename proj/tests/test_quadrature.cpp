#include <doctest.h>

#include <cmath>
#include <vector>

#include "diracspec/quadrature.hpp"

using namespace dirac;

namespace {

std::vector<double> sample(double (*f)(double), double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) v[static_cast<std::size_t>(k)] = f(a + (b - a) * k / n);
    return v;
}

}  // namespace

TEST_CASE("simpson is exact for cubics") {
    const auto v = sample([](double x) { return x * x * x - 2 * x + 1; }, 0.0, 2.0, 8);
    CHECK(simpson(v, 0.25) == doctest::Approx(4.0 - 4.0 + 2.0).epsilon(1e-14));
}

TEST_CASE("odd interval counts and tiny inputs") {
    const auto v = sample([](double x) { return x * x; }, 0.0, 1.0, 7);
    CHECK(simpson(v, 1.0 / 7) == doctest::Approx(1.0 / 3).epsilon(1e-14));
    const std::vector<double> two{1.0, 3.0};
    CHECK(simpson(two, 0.5) == doctest::Approx(1.0));
    CHECK(simpson(std::vector<double>{5.0}, 1.0) == 0.0);
}

TEST_CASE("fourth-order convergence on sin") {
    const auto err = [](int n) {
        const auto v = sample([](double x) { return std::sin(x); }, 0.0, 3.0, n);
        return std::fabs(simpson(v, 3.0 / n) - (1.0 - std::cos(3.0)));
    };
    const double ratio = err(16) / err(32);
    CHECK(ratio > 14.0);
    CHECK(ratio < 18.0);
}

TEST_CASE("cumulative integral matches the antiderivative at every node") {
    const int n = 64;
    const auto v = sample([](double x) { return std::exp(x); }, 0.0, 1.0, n);
    const auto c = cumulative_simpson(v, 1.0 / n);
    REQUIRE(c.size() == v.size());
    CHECK(c.front() == 0.0);
    for (int k = 0; k <= n; ++k)
        CHECK(std::fabs(c[static_cast<std::size_t>(k)] - (std::exp(double(k) / n) - 1.0)) <= 1e-8);
    CHECK(c.back() == doctest::Approx(simpson(v, 1.0 / n)).epsilon(1e-14));
}

TEST_CASE("differentiate is fourth order including the ends") {
    const auto err = [](int n) {
        const auto v = sample([](double x) { return std::sin(2 * x); }, 0.0, 1.0, n);
        const auto d = differentiate(v, 1.0 / n);
        double worst = 0.0;
        for (int k = 0; k <= n; ++k)
            worst = std::max(worst, std::fabs(d[static_cast<std::size_t>(k)] - 2 * std::cos(2.0 * k / n)));
        return worst;
    };
    CHECK(err(64) < 1e-6);
    CHECK(err(32) / err(64) > 12.0);
    CHECK_THROWS(differentiate(std::vector<double>{1, 2, 3, 4}, 0.1));
}
