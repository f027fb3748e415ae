#include "agr/granularity.hpp"
#include "catalog.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace agr;

namespace {

Monomial mono(NPoly x, NPoly lx = 0, NPoly l2x = 0, NPoly inv = 0) { return {x, lx, l2x, inv}; }

std::vector<GrainTerm> terms_of(const char* s, int k, Mode m, bool deriv = false) {
  return grain(parse(s), k, m, deriv).terms;
}

const NPoly N = NPoly::n();

// Value of a k = 1 grain with log base g, plus the dropped constants.
double grain_value(const GrainForm& gf, const Bindings& b) {
  const double lx = std::log(b.x) / std::log(b.g);
  const double l2x = std::log(lx) / std::log(b.g);
  double v = 0;
  for (const auto& t : gf.terms) {
    const double n = static_cast<double>(b.n);
    v += t.coeff.evaluate(n) * std::pow(b.x, (t.mono.x - t.mono.invx).evaluate(n)) *
         std::pow(lx, t.mono.logx.evaluate(n)) * std::pow(l2x, t.mono.log2x.evaluate(n));
  }
  for (const auto& d : gf.dropped) v += evaluate(d, b);
  return v;
}

}  // namespace

TEST(Grain, ReferenceForms) {
  using T = std::vector<GrainTerm>;
  EXPECT_EQ(terms_of("x^x", 1, Mode::Discrete), (T{{1, mono(1, 1)}}));
  EXPECT_EQ(terms_of("g^(x^n)", 2, Mode::Discrete), (T{{N, mono(0, 1)}}));
  EXPECT_EQ(terms_of("g^(g1^x)", 2, Mode::Discrete), (T{{1, mono(1)}}));
  EXPECT_EQ(terms_of("x^n*g^x", 1, Mode::Discrete), (T{{1, mono(1)}, {N, mono(0, 1)}}));
  EXPECT_EQ(terms_of("(g*x)^x", 1, Mode::Discrete), (T{{1, mono(1, 1)}, {1, mono(1)}}));

  const GrainForm d = grain(parse("g^x"), 1, Mode::Continuous, true);
  EXPECT_EQ(d.terms, (T{{1, mono(1)}}));
  ASSERT_EQ(d.dropped.size(), 1u);
  EXPECT_EQ(render(d.dropped[0]), "log(ln(g))");
}

TEST(Grain, SumKeepsDominantTerm) {
  const GrainForm gf = grain(parse("x^n+x+1"), 1, Mode::Discrete);
  EXPECT_EQ(gf.terms, (std::vector<GrainTerm>{{N, mono(0, 1)}}));
  EXPECT_FALSE(gf.exact);
}

TEST(Grain, KZeroRecordsInverse) {
  EXPECT_EQ(terms_of("-1/x", 0, Mode::Discrete), (std::vector<GrainTerm>{{-1, mono(0, 0, 0, 1)}}));
}

TEST(Grain, OutsideFragment) {
  EXPECT_THROW(grain(parse("x^x"), 0, Mode::Discrete), NotInFragment);
  EXPECT_THROW(grain(parse("-1/x"), 1, Mode::Continuous), NotInFragment);
  EXPECT_THROW(grain(parse("x"), 3, Mode::Continuous), DomainError);
}

TEST(NormalizeGrain, CombinesAndSorts) {
  GrainForm a{Mode::Continuous, 1, {{1, mono(1)}, {1, mono(1)}}, {}, true};
  EXPECT_EQ(normalize_grain(a).terms, (std::vector<GrainTerm>{{2, mono(1)}}));

  GrainForm b{Mode::Continuous, 1, {{1, mono(1)}, {1, mono(1, 1)}}, {}, true};
  EXPECT_EQ(normalize_grain(b).terms, (std::vector<GrainTerm>{{1, mono(1, 1)}, {1, mono(1)}}));

  GrainForm c{Mode::Discrete, 0, {{1, mono(0)}, {1, mono(0, 0, 0, N)}, {1, mono(1, 0, 0, N - 1)}}, {}, true};
  const auto t = normalize_grain(c).terms;
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0].mono, mono(0));
  EXPECT_EQ(t[1].mono, mono(1, 0, 0, N - 1));
  EXPECT_EQ(t[2].mono, mono(0, 0, 0, N));
}

TEST(NormalizeGrain, Idempotent) {
  for (const auto& s : test::catalog())
    for (int k = 0; k <= 2; ++k) {
      try {
        const GrainForm gf = grain(parse(s), k, Mode::Discrete);
        EXPECT_EQ(normalize_grain(gf).terms, gf.terms) << s << " k=" << k;
      } catch (const NotInFragment&) {
      }
    }
}

TEST(Grain, LogOfProductIsSumOfLogs) {
  const auto& cat = test::catalog();
  for (const auto& a : cat)
    for (const auto& b : cat) {
      GrainForm ga, gb, gab;
      try {
        ga = grain(parse(a), 1, Mode::Continuous);
        gb = grain(parse(b), 1, Mode::Continuous);
        gab = grain(parse(a) * parse(b), 1, Mode::Continuous);
      } catch (const NotInFragment&) {
        continue;
      }
      GrainForm sum = ga;
      sum.terms.insert(sum.terms.end(), gb.terms.begin(), gb.terms.end());
      EXPECT_EQ(gab.terms, normalize_grain(sum).terms) << a << " * " << b;
    }
}

TEST(Grain, KConsistency) {
  for (const auto& s : test::catalog())
    for (int k = 1; k <= 2; ++k) {
      GrainForm direct, stepped;
      try {
        direct = grain(parse(s), k, Mode::Continuous);
        stepped = grain_once(grain(parse(s), k - 1, Mode::Continuous));
      } catch (const NotInFragment&) {
        continue;
      }
      EXPECT_EQ(direct.terms, stepped.terms) << s << " k=" << k;
    }
}

TEST(Grain, AuditMatchesLogDomainValue) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> xs(10.0, 50.0);
  int audited = 0;
  for (bool deriv : {false, true})
    for (const auto& s : test::catalog()) {
      const Expr e = parse(s);
      GrainForm gf;
      try {
        gf = grain(e, 1, Mode::Continuous, deriv);
      } catch (const NotInFragment&) {
        continue;
      }
      if (!gf.exact) continue;
      const Expr target = deriv ? differentiate(e) : e;
      ++audited;
      for (int i = 0; i < 10; ++i) {
        Bindings b;
        b.x = xs(rng);
        b.g = static_cast<double>(2 + rng() % 4);
        b.n = 5 + static_cast<long long>(rng() % 3);
        const double want = evaluate(target, b, true) / std::log2(b.g);
        EXPECT_NEAR(grain_value(gf, b), want, 1e-9 * std::fabs(want)) << s << (deriv ? "'" : "");
      }
    }
  EXPECT_GE(audited, 10);
}
