#include "nld/common.hpp"
#include "nld/expression.hpp"

#include <doctest.h>

#include <cmath>

using namespace nld;

TEST_CASE("arithmetic and precedence") {
    CHECK(Expression("1 + 2 * 3").of_x(0) == 7.0);
    CHECK(Expression("2 ^ 3 ^ 2").of_x(0) == 512.0);
    CHECK(Expression("-2 ^ 2").of_x(0) == -4.0);
    CHECK(Expression("(1 + x) / 2").of_x(3) == 2.0);
    CHECK(Expression("pi").of_x(0) == doctest::Approx(kPi));
    CHECK(Expression("1e-3 * 2").of_x(0) == doctest::Approx(2e-3));
    CHECK(Expression().of_x(5) == 0.0);
}

TEST_CASE("functions and variables") {
    Expression e("sin(pi*x)*exp(-t)");
    CHECK(e(1.0, 0.5) == doctest::Approx(std::exp(-1.0)));
    CHECK(e.uses('t'));
    CHECK(e.uses('x'));
    CHECK_FALSE(e.uses('y'));
    CHECK(Expression("max(x, y) + min(x, y)")(0, 2, 5) == 7.0);
    CHECK(Expression("pow(x, 0.5) + sqrt(x) + abs(-x) + log(exp(x))").of_x(4) == doctest::Approx(12.0));
    CHECK(Expression("cos(0)").of_x(0) == 1.0);
}

TEST_CASE("piecewise evaluates only the selected branch") {
    Expression e("piecewise(abs(x), 1, 3, cos(x), log(-1))");
    CHECK(e.of_x(2.0) == doctest::Approx(std::cos(2.0)));
    CHECK(e.of_x(-1.0) == doctest::Approx(std::cos(1.0)));
    Expression z("piecewise(x, 0, 1, 1, 0)");
    CHECK(z.of_x(1.5) == 0.0);
}

TEST_CASE("syntax errors name the column") {
    CHECK_THROWS_AS(Expression("1 +"), ConfigError);
    CHECK_THROWS_AS(Expression("foo(x)"), ConfigError);
    CHECK_THROWS_AS(Expression("z"), ConfigError);
    CHECK_THROWS_AS(Expression("(1"), ConfigError);
    CHECK_THROWS_AS(Expression("piecewise(x, 1)"), ConfigError);
    try {
        Expression("1 + * 2");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
}
