#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "fnirenberg/error.hpp"
#include "fnirenberg/expr.hpp"
#include "oracles.hpp"

using namespace fnir;
using Op = Expression::Op;

namespace {

Vector at(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

ErrorKind kind_of(const std::string& src, const Vector& x) {
    try {
        parse_expression(src).evaluate(x);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error for " << src);
    return ErrorKind::InvalidInput;
}

}  // namespace

TEST_SUITE("expr") {

TEST_CASE("precedence builds the expected tree") {
    const Expression e = parse_expression("1 + 2*x1");
    REQUIRE(e.root().op == Op::Add);
    CHECK(e.root().kids[0]->op == Op::Number);
    CHECK(e.root().kids[1]->op == Op::Mul);
    CHECK(e.root().kids[1]->kids[1]->op == Op::Variable);
    CHECK(e.max_variable() == 1);
}

TEST_CASE("power is right associative and binds tighter than unary minus") {
    CHECK(parse_expression("2^3^2").evaluate(Vector()) == 512.0);
    CHECK(parse_expression("-2^2").evaluate(Vector()) == -4.0);
    CHECK(parse_expression("2^-1").evaluate(Vector()) == 0.5);
    CHECK(parse_expression("(-2)^2").evaluate(Vector()) == 4.0);
    CHECK(parse_expression("8/4/2").evaluate(Vector()) == 1.0);
    CHECK(parse_expression("8-4-2").evaluate(Vector()) == 2.0);
}

TEST_CASE("functions and literals") {
    CHECK(parse_expression("abs(x1)^1.5").evaluate(at({-2})) == doctest::Approx(std::pow(2.0, 1.5)));
    CHECK(parse_expression("pow(x2, 3)").evaluate(at({0, 2})) == 8.0);
    CHECK(parse_expression("sqrt(x1) + exp(0) + log(1) + sin(0) + cos(0)").evaluate(at({4})) == 4.0);
    CHECK(parse_expression("1.5e-3 * 2E2").evaluate(Vector()) == doctest::Approx(0.3));
}

TEST_CASE("evaluation on the sphere") {
    CHECK(eval_on_sphere(parse_expression("1"), SpherePoint::north_pole(4)) == 1.0);
    CHECK(eval_on_sphere(parse_expression("x3"), SpherePoint::north_pole(2)) == 1.0);
    CHECK(eval_on_sphere(parse_expression("2 + x1*x2"), SpherePoint::basis(2, 0)) == 2.0);
    try {
        eval_on_sphere(parse_expression("x5"), SpherePoint::north_pole(2));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownVariable);
    }
}

TEST_CASE("domain violations are reported, never NaN") {
    CHECK(kind_of("log(x1)", at({0})) == ErrorKind::Domain);
    CHECK(kind_of("log(x1)", at({-1})) == ErrorKind::Domain);
    CHECK(kind_of("1/x1", at({0})) == ErrorKind::Domain);
    CHECK(kind_of("sqrt(x1)", at({-1})) == ErrorKind::Domain);
    CHECK(kind_of("x1^0.5", at({-1})) == ErrorKind::Domain);
    try {
        parse_expression("1 + log(x1)").evaluate(at({-3}));
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("log") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry offset and expected set") {
    for (const char* bad : {"", "1 +", "2 * * 3", "foo(1)", "sin 1", "(1 + 2", "x0", "1 2", "pow(1)", "abs(1, 2)"}) {
        try {
            parse_expression(bad);
            FAIL("accepted " << bad);
        } catch (const SyntaxError& e) {
            CHECK(e.kind() == ErrorKind::Syntax);
            CHECK(e.offset() <= std::string(bad).size());
            CHECK_FALSE(e.expected().empty());
        }
    }
    try {
        parse_expression("1 + $");
    } catch (const SyntaxError& e) {
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("print and parse round trip") {
    for (const char* src : {"1 + 2*x1", "2^3^2", "(2^3)^2", "-x1^2", "(-x1)^2", "x1 - (x2 - x3)", "x1/(x2*x3)",
                            "pow(abs(x1 - 0.1), 1.5) + 3*cos(x2)", "-(-(1))", "0.1 + 1e-300 * x4"}) {
        const Expression e = parse_expression(src);
        const Expression again = parse_expression(e.print());
        CHECK(again == e);
        CHECK(again.print() == e.print());
    }
}

TEST_CASE("random expressions round trip and the parser never crashes on noise") {
    std::mt19937_64 g(21);
    const std::string alphabet = "x123+-*/^()., easpinco";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(1, 24);
    int parsed = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        std::string src;
        for (std::size_t k = len(g); k > 0; --k) src += alphabet[pick(g)];
        try {
            const Expression e = parse_expression(src);
            ++parsed;
            CHECK(parse_expression(e.print()) == e);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Syntax);
        }
    }
    CHECK(parsed > 0);
}

TEST_CASE("sphere gradient") {
    const TangentFrame north = normal_frame(SpherePoint::north_pole(2), 0);
    CHECK(sphere_gradient(parse_expression("2"), north).norm() < 1e-10);
    const Vector g = sphere_gradient(parse_expression("x1"), north);
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(g[1]) < 1e-6);
    CHECK(sphere_gradient(parse_expression("x1^2"), north).norm() < 1e-6);
    CHECK_THROWS_AS(sphere_gradient(parse_expression("x1"), north, 0.1), Error);
    CHECK_THROWS_AS(sphere_gradient(parse_expression("x1"), north, 1e-9), Error);
}

TEST_CASE("sphere gradient converges at second order") {
    // analytic directional derivative: grad_amb K . axis_k
    const Expression K = parse_expression("exp(x1) + x2*x3 + sin(x3)^3");
    auto amb = [](const Vector& x) {
        Vector d(3);
        d << std::exp(x[0]), x[2], x[1] + 3 * std::pow(std::sin(x[2]), 2) * std::cos(x[2]);
        return d;
    };
    auto g = oracle::rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const TangentFrame f = normal_frame(oracle::random_point(g, 2), 0);
        const Vector exact = f.axes.transpose() * amb(f.base.coords());
        const double e1 = (sphere_gradient(K, f, 1e-2) - exact).norm();
        const double e2 = (sphere_gradient(K, f, 5e-3) - exact).norm();
        CHECK(e1 / e2 >= 3.5);
    }
}

TEST_CASE("sphere hessian of a quadratic") {
    // K = x1^2 at the north pole of S^2: K(exp(v)) = sin^2(v1) ~ v1^2
    const Matrix H = sphere_hessian(parse_expression("x1^2"), normal_frame(SpherePoint::north_pole(2), 0));
    CHECK(H(0, 0) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(std::abs(H(0, 1)) < 1e-6);
    CHECK(std::abs(H(1, 1)) < 1e-6);
}

}  // TEST_SUITE
