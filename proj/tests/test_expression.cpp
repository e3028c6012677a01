#include "pinncert/expression.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace pinncert;

TEST_CASE("expression evaluation") {
  const Expression e = Expression::parse("2*x + sin(pi*y) - exp(-t)/2 ^ 2");
  Expression::Env env = {{"x", 1.5}, {"y", 0.5}, {"t", 0.0}};
  CHECK_THAT(e.eval(env), Catch::Matchers::WithinRel(3.0 + 1.0 - 0.25, 1e-14));

  CHECK(Expression::parse("pi").eval({}) == M_PI);
  CHECK(Expression::parse("e").eval({}) == M_E);
  CHECK(Expression::parse("-x^2").eval({{"x", 3.0}}) == -9.0);  // unary binds outside ^
  CHECK(Expression::parse("2^3^2").eval({}) == 512.0);          // right associative
  CHECK(Expression::parse("abs(-3.5)").eval({}) == 3.5);
  CHECK(Expression::parse("(1+2)*(3-1)").eval({}) == 6.0);
}

TEST_CASE("expression parse errors") {
  CHECK_THROWS_AS(Expression::parse("2*"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("sin(1"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("foo(1)"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("1 2"), ConfigError);
  CHECK_THROWS_AS(Expression::parse("x + $"), ConfigError);
  const Expression unbound = Expression::parse("nope + 1");
  CHECK_THROWS_AS(unbound.eval({}), ConfigError);
}

TEST_CASE("symbolic derivative matches finite differences") {
  const std::vector<std::string> exprs = {
      "x^3 - 2*x + 1",
      "sin(2*x) * cos(x)",
      "exp(-x^2) + x/(1+x^2)",
      "abs(x)*x",
      "cos(pi*x)*cos(pi*y)",
  };
  for (const auto& text : exprs) {
    const Expression f = Expression::parse(text);
    const Expression df = f.derivative("x");
    for (double x : {-1.2, -0.3, 0.4, 0.9, 1.7}) {
      Expression::Env env = {{"x", x}, {"y", 0.3}};
      Expression::Env hi = env, lo = env;
      hi["x"] = x + 1e-6;
      lo["x"] = x - 1e-6;
      const double fd = (f.eval(hi) - f.eval(lo)) / 2e-6;
      CHECK_THAT(df.eval(env), Catch::Matchers::WithinAbs(fd, 1e-6));
    }
  }
}

TEST_CASE("derivative of a power needs a constant exponent") {
  const Expression f = Expression::parse("x^x");
  CHECK_THROWS_AS(f.derivative("x"), ConfigError);
  // constant-exponent powers differentiate fine
  const Expression g = Expression::parse("(1+x)^3");
  CHECK_THAT(g.derivative("x").eval({{"x", 1.0}}), Catch::Matchers::WithinRel(12.0, 1e-14));
}

TEST_CASE("depends_on") {
  const Expression f = Expression::parse("sin(x) + y");
  CHECK(f.depends_on("x"));
  CHECK(f.depends_on("y"));
  CHECK_FALSE(f.depends_on("t"));
}
