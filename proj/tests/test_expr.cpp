#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "funcoord/expr.hpp"

using namespace funcoord;

TEST_CASE("literals, variables and arithmetic") {
    const Expr e = Expr::parse("2*x + 3.5", {"x"});
    CHECK(e.eval1(2.0) == doctest::Approx(7.5));

    const Expr two = Expr::parse("x*y - y/2", {"x", "y"});
    CHECK(two.eval2(3.0, 4.0) == doctest::Approx(10.0));
}

TEST_CASE("precedence and associativity") {
    CHECK(Expr::parse("2+3*4", {}).eval({}) == doctest::Approx(14.0));
    CHECK(Expr::parse("2*3^2", {}).eval({}) == doctest::Approx(18.0));
    CHECK(Expr::parse("2^3^2", {}).eval({}) == doctest::Approx(512.0));  // right-assoc
    CHECK(Expr::parse("-2^2", {}).eval({}) == doctest::Approx(-4.0));
    CHECK(Expr::parse("(2+3)*4", {}).eval({}) == doctest::Approx(20.0));
    CHECK(Expr::parse("6/3/2", {}).eval({}) == doctest::Approx(1.0));  // left-assoc
    CHECK(Expr::parse("1-2-3", {}).eval({}) == doctest::Approx(-4.0));
}

TEST_CASE("functions and constants") {
    CHECK(Expr::parse("exp(0)", {}).eval({}) == doctest::Approx(1.0));
    CHECK(Expr::parse("sin(pi/2)", {}).eval({}) == doctest::Approx(1.0));
    CHECK(Expr::parse("cos(pi)", {}).eval({}) == doctest::Approx(-1.0));
    CHECK(Expr::parse("e^2", {}).eval({}) == doctest::Approx(std::exp(2.0)));
    const Expr gauss = Expr::parse("exp(-(x-y)^2/2)", {"x", "y"});
    CHECK(gauss.eval2(1.0, 3.0) == doctest::Approx(std::exp(-2.0)));
    // the xD -> D kernel shape
    const Expr omega = Expr::parse("exp(x*exp(-y))", {"x", "y"});
    CHECK(omega.eval2(2.0, 1.0) == doctest::Approx(std::exp(2.0 * std::exp(-1.0))));
}

TEST_CASE("errors carry column positions") {
    try {
        Expr::parse("e^(x", {"x"});
        CHECK(false);
    } catch (const expr_error& err) {
        CHECK(err.column() == 5);
        CHECK(std::string(err.what()).find("unbalanced parenthesis") != std::string::npos);
    }
    try {
        Expr::parse("2 + foo", {"x"});
        CHECK(false);
    } catch (const expr_error& err) {
        CHECK(err.column() == 5);
        CHECK(std::string(err.what()).find("foo") != std::string::npos);
    }
    try {
        Expr::parse("1 + ", {});
        CHECK(false);
    } catch (const expr_error& err) {
        CHECK(err.column() == 5);
    }
    try {
        Expr::parse("(1+2))", {});
        CHECK(false);
    } catch (const expr_error& err) {
        CHECK(err.column() == 6);
    }
    CHECK_THROWS_AS(Expr::parse("2 @ 3", {}), expr_error);
    CHECK_THROWS_AS(Expr::parse("sin 3", {}), expr_error);
}

TEST_CASE("arity is enforced at evaluation") {
    const Expr e = Expr::parse("x + 1", {"x"});
    CHECK_THROWS_AS(e.eval({}), std::invalid_argument);
    CHECK_THROWS_AS(e.eval({1.0, 2.0}), std::invalid_argument);
}
