#include "agr/calculus.hpp"
#include "catalog.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace agr;

TEST(Parse, RoundTripsCatalog) {
  for (const auto& s : test::catalog()) {
    const Expr e = parse(s);
    EXPECT_EQ(parse(render(e)), e) << s << " rendered as " << render(e);
  }
}

TEST(Parse, RendersCanonically) {
  EXPECT_EQ(render(parse("x^x")), "x^x");
  EXPECT_EQ(render(parse("g^(x^n)")), "g^(x^n)");
  EXPECT_EQ(render(parse("-1/x")), "-1/x");
  EXPECT_EQ(render(parse("x + x^n + 1")), "x^n + x + 1");
}

TEST(Parse, PowerIsRightAssociative) { EXPECT_EQ(parse("g^g1^x"), parse("g^(g1^x)")); }

TEST(Parse, DivisionIsNegativePower) { EXPECT_EQ(parse("1/x"), parse("x^(-1)")); }

TEST(Parse, ReportsOffsetOfBadToken) {
  try {
    parse("x + $");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse("x +"), SyntaxError);
  EXPECT_THROW(parse("(x"), SyntaxError);
  EXPECT_THROW(parse("1.5*x"), SyntaxError);
  EXPECT_THROW(parse("x*y"), SyntaxError);
  EXPECT_THROW(parse("z"), SyntaxError);
}

TEST(Simplify, Identities) {
  EXPECT_EQ(simplify(Expr::node(Kind::Mul, {num(1), x()})), x());
  EXPECT_EQ(simplify(Expr::node(Kind::Add, {x(), Expr::node(Kind::Neg, {x()})})), num(0));
  EXPECT_EQ(simplify(Expr::node(Kind::Pow, {Expr::node(Kind::Pow, {x(), num(2)}), num(3)})),
            Expr::node(Kind::Pow, {x(), num(6)}));
}

TEST(Simplify, IdempotentOnCatalog) {
  for (const auto& s : test::catalog()) {
    const Expr e = simplify(parse(s));
    EXPECT_EQ(simplify(e), e) << s;
  }
}

TEST(Simplify, PreservesValue) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xs(2.0, 20.0);
  const std::vector<std::string> raw = {"x*x*x", "(x^2)^3/x", "x + x + 2*x", "g^x*g^x", "(g*x)^2 - x^2*g^2 + x"};
  for (const auto& s : raw) {
    const Expr e = parse(s);
    for (int i = 0; i < 20; ++i) {
      Bindings b;
      b.x = xs(rng);
      b.g = 3;
      const double want = evaluate(e, b);
      EXPECT_NEAR(evaluate(simplify(e), b), want, 1e-12 * std::fabs(want)) << s;
    }
  }
}

TEST(Evaluate, Examples) {
  Bindings b;
  b.x = 3;
  EXPECT_DOUBLE_EQ(evaluate(parse("x^x"), b), 27.0);
  b.x = 10;
  b.g = 2;
  EXPECT_DOUBLE_EQ(evaluate(parse("g^x"), b), 1024.0);
  b.x = 100;
  EXPECT_NEAR(evaluate(parse("x^x"), b, true), 100.0 * std::log2(100.0), 1e-9);
}

TEST(Evaluate, Errors) {
  Bindings b;
  b.x = 2000;
  EXPECT_THROW(evaluate(parse("x^x"), b), EvaluationError);
  EXPECT_NO_THROW(evaluate(parse("x^x"), b, true));
  b.x = -1;
  EXPECT_THROW(evaluate(parse("x"), b), EvaluationError);
}
