// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: agr_acceptance <path-to-agr-binary>

#include "agr/agr.hpp"
#include "catalog.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>

using namespace agr;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::set<u64> brute(Family fam, const FieldParams& f, u64 y, u64 n = 5) {
  std::set<u64> out;
  for (u64 x = 1; x < f.p; ++x)
    if (eval_family({fam, f, n, y, {}}, x) == y) out.insert(x);
  return out;
}

Outcome golden_verdicts() {
  Outcome o;
  const Mode D = Mode::Discrete;
  struct Row {
    const char* f;
    const char* h;
    std::optional<int> k;
    Verdict want;
  };
  const Row rows[] = {
      {"x^x", "g^x", std::nullopt, Verdict::Harder},
      {"(g*x)^x", "x^x", std::nullopt, Verdict::Equivalent},
      {"g^(x^n)", "g^x", 2, Verdict::Equivalent},
      {"x^n", "g^x", std::nullopt, Verdict::EasierOrEquivalent},
      {"x^n+x+1", "x^n", 0, Verdict::Harder},
      {"g^(g1^x)", "g^x", 2, Verdict::EquivalentOrNoSolution},
      {"x^n*g^x", "g^x", std::nullopt, Verdict::Equivalent},
      {"x*g^x", "g^x", std::nullopt, Verdict::Equivalent},
  };
  for (const auto& r : rows) {
    const Verdict v = agr_compare(parse(r.f), parse(r.h), D, r.k).verdict;
    if (v != r.want) o.fail(std::string(r.f) + " vs " + r.h + " gave " + to_string(v));
  }
  const auto chain = rank_difficulty({parse("x^x"), parse("g^x"), parse("-1/x"), parse("x^n"), parse("x")},
                                     Mode::Continuous, std::nullopt, true);
  const char* want[] = {"x", "-1/x", "x^n", "g^x", "x^x"};
  if (chain.size() != 5) o.fail("continuous chain has " + std::to_string(chain.size()) + " classes");
  else
    for (int i = 0; i < 5; ++i)
      if (chain[i] != std::vector<Expr>{parse(want[i])}) o.fail("continuous chain position " + std::to_string(i));
  return o;
}

Outcome limit_forms() {
  Outcome o;
  const NPoly N = NPoly::n();
  const Mode D = Mode::Discrete;
  const ComparisonResult a = agr_compare(parse("g^(x^n)"), parse("g^x"), D, 2);
  if (a.limit.kind != LimitVerdict::Kind::Const || a.limit.value != NFrac(N)) o.fail("g^(x^n) limit is not Const(n)");
  const ComparisonResult b = agr_compare(parse("x^n*g^x"), parse("g^x"), D, 1);
  if (b.limit.kind != LimitVerdict::Kind::ConstInterval || b.limit.lo != NFrac(1) || b.limit.hi != NFrac(N + 1))
    o.fail("x^n*g^x limit is not ConstInterval(1, n+1)");
  const Tendency t = ratio_tendency({0, 1, 0, 0}, {1, 0, 0, 0}, D);
  if (t.kind != Tendency::Kind::Oscillates || !(t.lo == Bound::zero()) || !(t.hi == Bound::constant(1)))
    o.fail("log x / x is not Oscillates(0, 1)");
  return o;
}

// Central difference with the step shrunk where f grows fast relative to itself.
double central_difference(const Expr& e, double rate, Bindings b) {
  const double h = rate != 0 ? std::min(1e-5 * b.x, 1e-4 / std::fabs(rate)) : 1e-5 * b.x;
  const double x0 = b.x;
  b.x = x0 + h;
  const double up = evaluate(e, b);
  b.x = x0 - h;
  return (up - evaluate(e, b)) / (2 * h);
}

Outcome derivative_suite() {
  Outcome o;
  const std::pair<const char*, Expr> derivs[] = {
      {"x", parse("1")},
      {"-1/x", parse("1/x^2")},
      {"x^n", parse("n*x^(n-1)")},
      {"g^x", simplify(parse("g^x") * ln(g()))},
      {"x^x", simplify(parse("x^x") * (ln(x()) + num(1)))},
  };
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> xs(2.0, 30.0);
  for (const auto& [s, want] : derivs) {
    const Expr d = differentiate(parse(s));
    if (d != want) o.fail(std::string("d/dx ") + s + " = " + render(d));
    for (int i = 0; i < 20; ++i) {
      Bindings b;
      b.x = xs(rng);
      b.g = 3;
      b.n = 6;
      const double exact = evaluate(d, b);
      if (std::fabs(exact - central_difference(parse(s), exact / evaluate(parse(s), b), b)) > 1e-6 * std::fabs(exact))
        o.fail(std::string("finite difference mismatch for ") + s);
    }
  }
  const std::pair<const char*, const char*> rates[] = {
      {"x^n", "y^(1/n)/(n*y)"}, {"g^x", "1/(y*ln(g))"}, {"x^x", "1/(y*(ln(x)+1))"}};
  for (const auto& [s, want] : rates) {
    const Expr f = parse(s);
    const Expr r = inverse_rate(f);
    if (r != parse(want, true)) o.fail(std::string("inverse rate of ") + s + " = " + render(r));
    const Expr df = differentiate(f);
    for (int i = 0; i < 20; ++i) {
      Bindings b;
      b.x = xs(rng);
      b.g = 3;
      b.n = 6;
      b.y = evaluate(f, b);
      const double exact = 1.0 / evaluate(df, b);
      if (std::fabs(evaluate(r, b) - exact) > 1e-6 * std::fabs(exact))
        o.fail(std::string("inverse rate mismatch for ") + s);
    }
  }
  return o;
}

Outcome reduction_equivalence() {
  Outcome o;
  for (u64 p : {7, 11, 13}) {
    const FieldParams f = make_field(p);
    int bits = 0;
    for (u64 v = p - 1; v; v >>= 1) ++bits;
    for (u64 g = 1; g < p; ++g) {
      if (gcd(g, p - 1) != 1) continue;
      FieldParams shifted = f;
      shifted.g = g;
      for (u64 y = 1; y < p; ++y)
        if (reduce_gx_shift(y, f, g, exhaustive_tlp_oracle()).solutions != brute(Family::GXSHIFT, shifted, y))
          o.fail("gx-shift p=" + std::to_string(p) + " g=" + std::to_string(g) + " y=" + std::to_string(y));
    }
    for (u64 y = 1; y < p; ++y) {
      if (solve_gxxx(f, y).solutions != brute(Family::GXXX, f, y)) o.fail("gxxx p=" + std::to_string(p));
      if (reduce_gxn_to_dlp(y, f, 5, bsgs_dlp_oracle()).solutions != brute(Family::GXN, f, y))
        o.fail("gxn p=" + std::to_string(p));
      if (reduce_dlp_to_spp(y, f, bits, exhaustive_spp_oracle()).solutions != brute(Family::DLP, f, y))
        o.fail("dlp-spp p=" + std::to_string(p));
    }
  }
  FieldParams c;
  c.g = 2;
  c.g1 = 1;
  for (Family fam : {Family::ID, Family::DLP, Family::TLP, Family::RFP, Family::GXN, Family::POLY, Family::XNGX,
                     Family::XGX, Family::GXXX, Family::GXSHIFT, Family::NRECIP})
    for (auto [p, q] : std::vector<std::pair<u64, u64>>{{7, 11}, {11, 13}, {7, 13}}) {
      const ProblemInstance proto{fam, c, 5, 0, {}};
      for (u64 y = 0; y < p * q; ++y)
        if (reduce_composite_crt(y, proto, p, q).solutions != solve_composite_exhaustive(y, proto, p * q, 1, p * q - 1))
          o.fail("crt " + to_string(fam) + " " + std::to_string(p) + "*" + std::to_string(q));
    }
  return o;
}

Outcome solver_cross_check() {
  Outcome o;
  std::mt19937_64 rng(23);
  for (u64 p : {101, 1009, 10007}) {
    const FieldParams f = make_field(p);
    const u64 bound = 2 * static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(p - 1)))) + 8;
    std::uniform_int_distribution<u64> ys(1, p - 1);
    for (int i = 0; i < 100; ++i) {
      const u64 y = ys(rng);
      const BsgsResult b = solve_dlp_bsgs(f, y);
      if (solve_exhaustive({Family::DLP, f, 5, y, {}}).solutions != std::set<u64>{b.x})
        o.fail("BSGS disagrees at p=" + std::to_string(p) + " y=" + std::to_string(y));
      if (b.ops > bound) o.fail("BSGS used " + std::to_string(b.ops) + " ops at p=" + std::to_string(p));
    }
  }
  return o;
}

Outcome census_conservation() {
  Outcome o;
  for (u64 p : {7, 11, 13}) {
    const FieldParams f = make_field(p);
    for (Family fam : all_families()) {
      const Census c = preimage_census({fam, f, 5, 1, {}});
      u64 total = 0;
      for (u64 v : c.counts) total += v;
      if (total != p - 1) o.fail(to_string(fam) + " at p=" + std::to_string(p) + " sums to " + std::to_string(total));
      if (fam == Family::DLP && c.max_preimage != 1) o.fail("DLP is not bijective at p=" + std::to_string(p));
    }
  }
  return o;
}

Outcome exponent_ordering() {
  Outcome o;
  for (u64 p : {11, 101, 1009}) {
    FieldParams f = make_field(p);
    f.g = 2;
    const Family chain[] = {Family::ID, Family::RFP, Family::DLP, Family::TLP};
    for (int i = 0; i + 1 < 4; ++i) {
      const double a = intersection_exponent(chain[i], f, 5);
      const double b = intersection_exponent(chain[i + 1], f, 5);
      if (!(a < b))
        o.fail("p=" + std::to_string(p) + ": " + to_string(chain[i]) + " " + format_g6(a) + " >= " +
               to_string(chain[i + 1]) + " " + format_g6(b));
    }
  }
  return o;
}

std::string capture(const std::string& cmd, int& code) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    code = -1;
    return out;
  }
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  code = pclose(pipe);
  return out;
}

Outcome sweep_determinism(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.fail("no agr binary given");
    return o;
  }
  const std::string cmd = "'" + cli + "' sweep --family id,rfp,dlp,tlp,xgx --primes 101,1009,10007 --seed 5";
  int c1 = 0;
  int c2 = 0;
  const std::string a = capture(cmd, c1);
  const std::string b = capture(cmd, c2);
  if (c1 != 0 || c2 != 0) o.fail("sweep exited with status " + std::to_string(c1) + "/" + std::to_string(c2));
  else if (a != b) o.fail("outputs differ");
  else if (a.empty()) o.fail("empty output");
  return o;
}

Verdict flip(Verdict v) {
  switch (v) {
    case Verdict::Easier: return Verdict::Harder;
    case Verdict::Harder: return Verdict::Easier;
    case Verdict::EasierOrEquivalent: return Verdict::EquivalentOrNoSolution;
    case Verdict::EquivalentOrNoSolution: return Verdict::EasierOrEquivalent;
    default: return v;
  }
}

Outcome verdict_algebra() {
  Outcome o;
  const auto& cat = test::catalog();
  for (Mode m : {Mode::Continuous, Mode::Discrete}) {
    std::map<std::pair<std::size_t, std::size_t>, std::optional<Verdict>> v;
    for (std::size_t i = 0; i < cat.size(); ++i)
      for (std::size_t j = 0; j < cat.size(); ++j) {
        try {
          v[{i, j}] = agr_compare(parse(cat[i]), parse(cat[j]), m).verdict;
        } catch (const DomainError&) {
          v[{i, j}] = std::nullopt;
        }
      }
    for (std::size_t i = 0; i < cat.size(); ++i) {
      const ComparisonResult self = agr_compare(parse(cat[i]), parse(cat[i]), m);
      if (self.limit.kind != LimitVerdict::Kind::Const || self.limit.value != NFrac(1))
        o.fail("reflexivity for " + cat[i]);
      for (std::size_t j = 0; j < cat.size(); ++j) {
        const auto a = v[{i, j}];
        const auto b = v[{j, i}];
        if (a && b && flip(*a) != *b) o.fail("antisymmetry for " + cat[i] + " vs " + cat[j]);
        for (std::size_t k = 0; k < cat.size(); ++k) {
          const auto c = v[{j, k}];
          const auto d = v[{i, k}];
          if (a && c && *a == Verdict::Easier && *c == Verdict::Easier && d && *d != Verdict::Easier)
            o.fail("transitivity for " + cat[i] + " < " + cat[j] + " < " + cat[k]);
        }
      }
      GrainForm gf;
      try {
        gf = grain(parse(cat[i]), 1, m);
      } catch (const NotInFragment&) {
        continue;
      }
      if (gf.terms.empty()) continue;
      for (int c : {2, 3, 7})
        if (agr_compare(parse("(" + cat[i] + ")*" + std::to_string(c)), parse(cat[i]), m, 1).verdict !=
            Verdict::Equivalent)
          o.fail("scale invariance for " + cat[i]);
    }
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 means no time limit
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {1, "golden verdict table", 1.0, golden_verdicts},
      {2, "limit-form exactness", 0, limit_forms},
      {3, "derivative suite", 1.0, derivative_suite},
      {4, "reduction equivalence", 30.0, reduction_equivalence},
      {5, "solver cross-check", 10.0, solver_cross_check},
      {6, "census conservation and DLP bijectivity", 0, census_conservation},
      {7, "intersection-exponent ordering", 1.0, exponent_ordering},
      {8, "sweep determinism", 0, [&] { return sweep_determinism(cli); }},
      {9, "verdict algebra", 1.0, verdict_algebra},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.fail(std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.ok && c.limit_s > 0 && secs > c.limit_s) o.fail("took " + format_g6(secs) + " s");
    if (!o.ok) ++failed;
    std::printf("%s criterion %d: %s (%.3f s)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                o.ok ? "" : " - ", o.detail.c_str());
  }
  return failed == 0 ? 0 : 1;
}
