#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fnirenberg/quadrature.hpp"

using namespace fnir;
using std::numbers::pi;

TEST_SUITE("quadrature") {

TEST_CASE("polynomials are integrated exactly") {
    const QuadResult r = integrate([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(9.0 - 3.0 + 3.0).epsilon(1e-14));
}

TEST_CASE("endpoint singularities") {
    const QuadResult r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
    const QuadResult l = integrate([](double x) { return std::log(x); }, 0.0, 1.0);
    CHECK(l.value == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("half line and real line") {
    const QuadResult a = integrate_to_infinity([](double t) { return 1.0 / (1.0 + t * t); }, 0.0);
    CHECK(a.value == doctest::Approx(pi / 2).epsilon(1e-12));
    const QuadResult e = integrate_to_infinity([](double t) { return std::exp(-t); }, 1.0);
    CHECK(e.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    const std::vector<double> breaks{0.0};
    const QuadResult g = integrate_real_line([](double t) { return std::exp(-std::abs(t)); }, breaks);
    CHECK(g.value == doctest::Approx(2.0).epsilon(1e-12));
    const QuadResult c = integrate_real_line([](double t) { return 1.0 / (1.0 + t * t); }, {});
    CHECK(c.value == doctest::Approx(pi).epsilon(1e-12));
}

TEST_CASE("kinks at break points") {
    const std::vector<double> breaks{-0.3, 0.7};
    const QuadResult r = integrate_real_line(
        [](double t) { return std::abs(t - 0.7) * std::abs(t + 0.3) * std::exp(-t * t); }, breaks);
    CHECK(r.converged);
    CHECK(r.error < 1e-10);
}

TEST_CASE("empty interval and reversed bounds") {
    CHECK(integrate([](double) { return 1.0; }, 1.0, 1.0).value == 0.0);
    CHECK(integrate([](double) { return 1.0; }, 2.0, 1.0).value == doctest::Approx(-1.0));
}

}  // TEST_SUITE
