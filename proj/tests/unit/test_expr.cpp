#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "hamreal/expr.hpp"

using namespace hamreal;

namespace {

Chart hp_chart() {
  return Chart({"x", "y"}, std::string("t"), {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}, {"delta", 1.0}});
}

}  // namespace

TEST_CASE("parse: multiplier text evaluates to exp(ct)/(x y^2)") {
  const Chart ch = hp_chart();
  const Expr e = parse("exp(c*t)/(x*y^2)", ch);
  Point p{{"x", 1.5}, {"y", 0.7}, {"t", 0.3}, {"c", 2.0}};
  CHECK(eval(e, p) == doctest::Approx(std::exp(0.6) / (1.5 * 0.49)).epsilon(1e-15));
}

TEST_CASE("parse: bare symbol gives a variable node") {
  const Expr e = parse("x", hp_chart());
  CHECK(e.op() == Op::Variable);
  CHECK(e.name() == "x");
}

TEST_CASE("parse: polynomial at a point") {
  const Expr e = parse("a*x - b*x*y", hp_chart());
  CHECK(eval(e, Point{{"x", 2}, {"y", 3}, {"a", 1}, {"b", 1}}) == -4.0);
}

TEST_CASE("parse: precedence and associativity") {
  const Chart ch({"x"}, std::nullopt);
  const Point p{{"x", 3.0}};
  CHECK(eval(parse("-x^2", ch), p) == -9.0);
  CHECK(eval(parse("2^3^2", ch), p) == 512.0);
  CHECK(eval(parse("2^-1", ch), p) == 0.5);
  CHECK(eval(parse("1 - x - 1", ch), p) == -3.0);
  CHECK(eval(parse("12/x/2", ch), p) == 2.0);
  CHECK(eval(parse("-x*-x", ch), p) == 9.0);
  CHECK(eval(parse("1.5e1 + .5", ch), p) == 15.5);
  CHECK(eval(parse("sqrt(x+1)", ch), p) == 2.0);
}

TEST_CASE("parse: errors carry offsets and symbol names") {
  const Chart ch = hp_chart();
  try {
    parse("x + * y", ch);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse("x + (y", ch), ParseError);
  CHECK_THROWS_AS(parse("x y", ch), ParseError);
  CHECK_THROWS_AS(parse("", ch), ParseError);
  CHECK_THROWS_AS(parse("tan(x)", ch), UndeclaredSymbol);
  try {
    parse("x + z", ch);
    FAIL("expected UndeclaredSymbol");
  } catch (const UndeclaredSymbol& e) {
    CHECK(e.symbol() == "z");
  }
}

TEST_CASE("eval: Lu first Hamiltonian") {
  const Chart ch({"x", "y", "z"}, std::string("t"), {{"alpha", 36.0}});
  const Expr h1 = parse("x^2/2 - alpha*z", ch);
  CHECK(eval(h1, Point{{"x", 1}, {"z", 1}, {"alpha", 36}}) == -35.5);
  CHECK(eval(Expr::constant(1.0), Point{}) == 1.0);
}

TEST_CASE("eval: domain errors and missing symbols") {
  const Chart ch = hp_chart();
  CHECK_THROWS_AS(eval(parse("ln(y)", ch), Point{{"y", 0.0}}), DomainError);
  CHECK_THROWS_AS(eval(parse("1/x", ch), Point{{"x", 0.0}}), DomainError);
  CHECK_THROWS_AS(eval(parse("sqrt(x)", ch), Point{{"x", -1.0}}), DomainError);
  CHECK_THROWS_AS(eval(parse("x^0.5", ch), Point{{"x", -1.0}}), DomainError);
  CHECK(eval(parse("x^2", ch), Point{{"x", -3.0}}) == 9.0);
  CHECK_THROWS_AS(eval(parse("x*y", ch), Point{{"x", 1.0}}), MissingSymbol);
}

TEST_CASE("diff: worked examples") {
  const Chart ch = hp_chart();
  const Point p{{"x", 1.2}, {"y", 0.8}, {"t", 0.4}, {"b", 1.7}, {"c", 0.9}};
  CHECK(eval(diff(parse("-b*ln(y)", ch), "y"), p) == doctest::Approx(-1.7 / 0.8));
  CHECK(diff(parse("c", ch), "x").is_constant(0.0));
  CHECK(eval(diff(parse("exp(c*t)", ch), "t"), p) == doctest::Approx(0.9 * std::exp(0.36)));
}

TEST_CASE("diff: general power f^g") {
  const Chart ch({"x"}, std::nullopt);
  const Expr e = parse("x^x", ch);
  const Point p{{"x", 1.7}};
  CHECK(eval(diff(e, "x"), p) == doctest::Approx(std::pow(1.7, 1.7) * (std::log(1.7) + 1.0)));
}

TEST_CASE("grad: spatial coordinates only") {
  const Chart ch({"x", "y", "z"}, std::string("t"), {{"alpha", 36.0}});
  const auto g = grad(parse("x^2/2 - alpha*z + t", ch), ch);
  REQUIRE(g.size() == 3);
  const Point p{{"x", 1.5}, {"y", 2}, {"z", 1}, {"alpha", 36}, {"t", 0}};
  CHECK(eval(g[0], p) == 1.5);
  CHECK(eval(g[1], p) == 0.0);
  CHECK(eval(g[2], p) == -36.0);
  for (const auto& c : grad(Expr::constant(4.0), ch)) CHECK(c.is_constant(0.0));
  const auto g2 = grad(parse("(y^2+z^2)/2", ch), ch);
  CHECK(eval(g2[0], p) == 0.0);
  CHECK(eval(g2[1], p) == 2.0);
  CHECK(eval(g2[2], p) == 1.0);
}

TEST_CASE("simplify: local rules") {
  const Chart ch = hp_chart();
  CHECK(structurally_equal(simplify(parse("0*x + y", ch)), parse("y", ch)));
  CHECK(simplify(parse("x/x", ch)).is_constant(1.0));
  CHECK(simplify(parse("(a-a)*exp(t)", ch)).is_constant(0.0));
  CHECK(simplify(parse("--x", ch)).op() == Op::Variable);
  // Invalid constant operations are left unevaluated.
  CHECK_THROWS_AS(eval(simplify(parse("ln(0) + 1", ch)), Point{}), DomainError);
  CHECK_THROWS_AS(eval(simplify(parse("1/(2-2)", ch)), Point{}), DomainError);
}

TEST_CASE("chart: validation and points") {
  CHECK_THROWS_AS(Chart({"x", "x"}), ModelError);
  CHECK_THROWS_AS(Chart({"x", "t"}), ModelError);
  CHECK_THROWS_AS(Chart({"x"}, std::string("t"), {{"x", 1.0}}), ModelError);
  CHECK_THROWS_AS(Chart({"exp"}), ModelError);
  const Chart ch({"x"}, std::string("t"), {{"k", std::nullopt}});
  const double xs[] = {1.0};
  CHECK_THROWS_AS(ch.point(xs, 0.0), ModelError);
  const Chart bound = ch.with_parameters({{"k", 2.0}});
  CHECK(bound.point(xs, 0.5).at("k") == 2.0);
  CHECK_THROWS_AS(ch.with_parameters({{"q", 2.0}}), UndeclaredSymbol);
}

TEST_CASE("property: diff agrees with central differences") {
  gen::ExprGen g(7, {"x", "y"}, {"a"});
  std::size_t checked = 0;
  for (int i = 0; i < 200; ++i) {
    const Expr e = g.any(6);
    const Expr de = diff(e, "x");
    Point p{{"x", g.uniform(0.5, 2.0)}, {"y", g.uniform(0.5, 2.0)}, {"a", 1.3}};
    const double h = 1e-5;
    Point lo = p, hi = p;
    lo.set("x", p.at("x") - h);
    hi.set("x", p.at("x") + h);
    const double fd = (eval(e, hi) - eval(e, lo)) / (2 * h);
    const double exact = eval(de, p);
    INFO(to_string(e));
    CHECK(std::abs(exact - fd) <= 1e-5 * (1.0 + std::abs(exact)));
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("property: print then parse is function-equal") {
  const Chart ch({"x", "y"}, std::nullopt, {{"a", 1.3}});
  gen::ExprGen g(11, {"x", "y"}, {"a"});
  for (int i = 0; i < 100; ++i) {
    const Expr e = g.any(6);
    const Expr back = parse(to_string(e), ch);
    INFO(to_string(e));
    for (int k = 0; k < 100; ++k) {
      Point p{{"x", g.uniform(0.5, 2.0)}, {"y", g.uniform(0.5, 2.0)}, {"a", 1.3}};
      const double v = eval(e, p);
      CHECK(std::abs(eval(back, p) - v) <= 1e-12 * std::max(1.0, std::abs(v)));
    }
  }
}

TEST_CASE("property: simplify preserves values") {
  gen::ExprGen g(13, {"x", "y"}, {"a"});
  for (int i = 0; i < 100; ++i) {
    const Expr e = g.any(6);
    const Expr s = simplify(e);
    INFO(to_string(e));
    for (int k = 0; k < 100; ++k) {
      Point p{{"x", g.uniform(0.5, 2.0)}, {"y", g.uniform(0.5, 2.0)}, {"a", 1.3}};
      const double v = eval(e, p);
      CHECK(std::abs(eval(s, p) - v) <= 1e-12 * std::max(1.0, std::abs(v)));
    }
  }
}
