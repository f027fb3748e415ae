#pragma once

// k-fold logarithmic granularity of an expression, normalized into sums of
// monomials x^a * (log x)^b * (log log x)^c * inv(x)^d.

#include "agr/calculus.hpp"
#include "agr/expr.hpp"
#include "agr/npoly.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace agr {

enum class Mode { Continuous, Discrete };

inline std::string to_string(Mode m) { return m == Mode::Continuous ? "continuous" : "discrete"; }

inline Mode parse_mode(const std::string& s) {
  if (s == "continuous") return Mode::Continuous;
  if (s == "discrete") return Mode::Discrete;
  throw DomainError("unknown mode '" + s + "' (expected continuous or discrete)");
}

inline constexpr int kMaxGranularity = 2;

/// Per-level base tags g0, g1, g2 and the modulus tower p, phi(p), phi(phi(p)).
/// Symbolic only: the transform never reads numeric values from them.
struct FieldTags {
  static constexpr const char* base(int level) { return level == 0 ? "g0" : level == 1 ? "g1" : "g2"; }
  static constexpr const char* modulus(int level) { return level == 0 ? "p" : level == 1 ? "phi(p)" : "phi^2(p)"; }
};

struct Monomial {
  NPoly x;
  NPoly logx;
  NPoly log2x;
  NPoly invx;

  bool is_one() const { return x.is_zero() && logx.is_zero() && log2x.is_zero() && invx.is_zero(); }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    return {a.x + b.x, a.logx + b.logx, a.log2x + b.log2x, a.invx + b.invx};
  }
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.x == b.x && a.logx == b.logx && a.log2x == b.log2x && a.invx == b.invx;
  }
};

struct GrainTerm {
  NPoly coeff;
  Monomial mono;
  friend bool operator==(const GrainTerm&, const GrainTerm&) = default;
};

struct GrainForm {
  Mode mode = Mode::Continuous;
  int k = 0;
  std::vector<GrainTerm> terms;
  /// Neglected additive constants, kept for audit.
  std::vector<Expr> dropped;
  /// False once a lower-order summand or a log base was discarded, i.e. when
  /// the form is only asymptotically equal to log^k of the input.
  bool exact = true;

  bool is_zero() const { return terms.empty(); }
};

namespace detail {

/// Dominance order used for sorting: effective x-degree, then log x, then
/// log log x. Falls back to a structural order when the comparison depends
/// on n.
inline int dominance(const Monomial& a, const Monomial& b) {
  const NPoly diffs[] = {(a.x - a.invx) - (b.x - b.invx), a.logx - b.logx, a.log2x - b.log2x, b.invx - a.invx};
  for (const auto& d : diffs) {
    auto s = d.sign();
    if (!s) return d.coeff(d.degree()) > 0 ? 1 : -1;
    if (*s != 0) return *s;
  }
  return 0;
}

inline bool structural_less(const Monomial& a, const Monomial& b) {
  if (!(a.x == b.x)) return a.x < b.x;
  if (!(a.logx == b.logx)) return a.logx < b.logx;
  if (!(a.log2x == b.log2x)) return a.log2x < b.log2x;
  return a.invx < b.invx;
}

}  // namespace detail

/// Combines like monomials and sorts terms most-dominant first. Idempotent.
inline GrainForm normalize_grain(GrainForm gf) {
  std::vector<GrainTerm> out;
  for (const auto& t : gf.terms) {
    auto it = std::find_if(out.begin(), out.end(), [&](const GrainTerm& o) { return o.mono == t.mono; });
    if (it == out.end()) out.push_back(t);
    else it->coeff += t.coeff;
  }
  std::erase_if(out, [](const GrainTerm& t) { return t.coeff.is_zero(); });
  std::stable_sort(out.begin(), out.end(), [](const GrainTerm& a, const GrainTerm& b) {
    const int d = detail::dominance(a.mono, b.mono);
    if (d != 0) return d > 0;
    return detail::structural_less(b.mono, a.mono);
  });
  gf.terms = std::move(out);
  return gf;
}

namespace detail {

inline std::optional<NPoly> to_npoly(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const: return NPoly(e.value());
    case Kind::Param:
      if (e.param() == Param::N) return NPoly::n();
      return std::nullopt;
    case Kind::Neg: {
      auto a = to_npoly(e.arg(0));
      if (!a) return std::nullopt;
      return -*a;
    }
    case Kind::Add:
    case Kind::Mul: {
      NPoly acc = e.is(Kind::Add) ? NPoly(0) : NPoly(1);
      for (const auto& a : e.args()) {
        auto v = to_npoly(a);
        if (!v) return std::nullopt;
        acc = e.is(Kind::Add) ? acc + *v : acc * *v;
      }
      return acc;
    }
    case Kind::Pow: {
      auto b = to_npoly(e.arg(0));
      if (!b || !e.arg(1).is_integer() || e.arg(1).value() < 0) return std::nullopt;
      NPoly acc(1);
      for (BigInt i = 0; i < boost::multiprecision::numerator(e.arg(1).value()); ++i) acc *= *b;
      return acc;
    }
    default: return std::nullopt;
  }
}

inline Expr npoly_expr(const NPoly& p) {
  Expr acc = num(0);
  for (const auto& [d, c] : p.coeffs()) acc = acc + num(c) * pow(n(), num(d));
  return acc;
}

struct GrainState {
  std::vector<Expr> dropped;
  bool exact = true;
};

using Poly = std::vector<GrainTerm>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& ta : a)
    for (const auto& tb : b) out.push_back({ta.coeff * tb.coeff, ta.mono * tb.mono});
  return out;
}

/// Converts a log-level expression into a polynomial over the atoms.
inline Poly to_poly(const Expr& e, GrainState& st) {
  switch (e.kind()) {
    case Kind::Const: return {{NPoly(e.value()), {}}};
    case Kind::Param:
      if (e.param() == Param::N) return {{NPoly::n(), {}}};
      throw NotInFragment("symbolic base " + render(e) + " as a coefficient");
    case Kind::Var:
      if (e.sym() != Sym::X) throw NotInFragment("variable y in a granularity form");
      return {{NPoly(1), {NPoly(1), {}, {}, {}}}};
    case Kind::Neg: {
      Poly p = to_poly(e.arg(0), st);
      for (auto& t : p) t.coeff = -t.coeff;
      return p;
    }
    case Kind::Add: {
      Poly out;
      for (const auto& t : e.args()) {
        Poly p = to_poly(t, st);
        out.insert(out.end(), p.begin(), p.end());
      }
      return out;
    }
    case Kind::Mul: {
      Poly acc{{NPoly(1), {}}};
      for (const auto& f : e.args()) acc = poly_mul(acc, to_poly(f, st));
      return acc;
    }
    case Kind::Pow: {
      auto k = to_npoly(e.arg(1));
      if (!k) throw NotInFragment("exponent " + render(e.arg(1)) + " is not a polynomial in n");
      auto s = k->sign();
      if (!s) throw NotInFragment("exponent sign of " + render(e) + " depends on n");
      const Expr& b = e.arg(0);
      Poly base = to_poly(b, st);
      if (base.size() != 1) throw NotInFragment("power of a sum: " + render(e));
      const GrainTerm& t = base.front();
      if (!t.coeff.is_constant() && !(t.coeff == NPoly::n() && k->is_constant()))
        throw NotInFragment("symbolic coefficient raised to a power: " + render(e));
      // Coefficient: only constant-rational or integer powers are representable.
      NPoly coeff(1);
      if (!(t.coeff == NPoly(1))) {
        if (!k->is_constant() || boost::multiprecision::denominator(k->constant()) != 1)
          throw NotInFragment("coefficient with symbolic exponent in " + render(e));
        auto kk = boost::multiprecision::numerator(k->constant());
        if (kk < 0) {
          if (!t.coeff.is_constant()) throw NotInFragment("negative power of n in " + render(e));
          coeff = NPoly(Rational(1) / t.coeff.constant());
          kk = -kk;
          NPoly base_c = coeff;
          coeff = NPoly(1);
          for (BigInt i = 0; i < kk; ++i) coeff *= base_c;
        } else {
          for (BigInt i = 0; i < kk; ++i) coeff *= t.coeff;
        }
      }
      auto scale = [&](const NPoly& exp) { return exp * *k; };
      Monomial m{scale(t.mono.x), scale(t.mono.logx), scale(t.mono.log2x), scale(t.mono.invx)};
      // x^(-c) is recorded as inv(x)^c so exponents stay non-negative.
      if (*s < 0) {
        if (!t.mono.logx.is_zero() || !t.mono.log2x.is_zero())
          throw NotInFragment("negative power of a logarithm: " + render(e));
        m = Monomial{m.invx * NPoly(-1), {}, {}, m.x * NPoly(-1)};
      }
      return {{coeff, m}};
    }
    case Kind::Log:
    case Kind::Ln: {
      const Expr& a = e.arg(0);
      if (e.is(Kind::Ln)) st.exact = false;
      if (a == x()) return {{NPoly(1), {{}, NPoly(1), {}, {}}}};
      if ((a.is(Kind::Log) || a.is(Kind::Ln)) && a.arg(0) == x()) {
        if (a.is(Kind::Ln)) st.exact = false;
        return {{NPoly(1), {{}, {}, NPoly(1), {}}}};
      }
      if (!contains_var(a)) throw NotInFragment("constant " + render(e) + " in a non-additive position");
      throw NotInFragment("logarithm nesting beyond log log x: " + render(e));
    }
    default: throw NotInFragment("node " + render(e) + " is outside the log-polynomial fragment");
  }
}

inline GrainForm finish(const Expr& level_expr, Mode mode, int k, GrainState st) {
  std::vector<Expr> terms = level_expr.is(Kind::Add) ? level_expr.args() : std::vector<Expr>{level_expr};
  Poly poly;
  for (const auto& t : terms) {
    if (k >= 1 && !contains_var(t)) {
      st.dropped.push_back(t);
      continue;
    }
    Poly p = to_poly(t, st);
    poly.insert(poly.end(), p.begin(), p.end());
  }
  GrainForm gf{mode, k, std::move(poly), std::move(st.dropped), st.exact};
  return normalize_grain(std::move(gf));
}

Expr log_level(const Expr& e, int level, GrainState& st);

/// Compares the growth of two positive terms through their logarithms.
inline int compare_growth(const Expr& a, const Expr& b, int depth = 0) {
  if (depth > kMaxGranularity) return 0;
  GrainState sa;
  GrainState sb;
  Expr la = log_level(a, 0, sa);
  Expr lb = log_level(b, 0, sb);
  std::optional<GrainForm> ga;
  std::optional<GrainForm> gb;
  try {
    ga = finish(la, Mode::Continuous, 1, sa);
  } catch (const NotInFragment&) {
  }
  try {
    gb = finish(lb, Mode::Continuous, 1, sb);
  } catch (const NotInFragment&) {
  }
  if (!ga && !gb) return compare_growth(la, lb, depth + 1);
  if (!ga) return 1;
  if (!gb) return -1;
  const auto& ta = ga->terms;
  const auto& tb = gb->terms;
  for (std::size_t i = 0; i < std::min(ta.size(), tb.size()); ++i) {
    const int d = dominance(ta[i].mono, tb[i].mono);
    if (d != 0) {
      auto s = (d > 0 ? ta[i].coeff : tb[i].coeff).sign();
      return d > 0 ? (s.value_or(1) > 0 ? 1 : -1) : (s.value_or(1) > 0 ? -1 : 1);
    }
    auto c = (ta[i].coeff - tb[i].coeff).sign();
    if (c && *c != 0) return *c;
  }
  if (ta.size() != tb.size()) {
    const auto& extra = ta.size() > tb.size() ? ta[tb.size()] : tb[ta.size()];
    const int s = extra.coeff.sign().value_or(1);
    return ta.size() > tb.size() ? s : -s;
  }
  return 0;
}

/// One logarithm at granularity level `level` (0 = base g, 1 = base g1).
/// log(A + B) keeps only the dominant summand.
inline Expr log_level(const Expr& e, int level, GrainState& st) {
  if (!contains_var(e)) {
    if (e.is_const() && e.value() <= 0) throw NotInFragment("logarithm of non-positive constant " + render(e));
    if (e.is(Kind::Neg)) throw NotInFragment("logarithm of negative value " + render(e));
    if (e.is(Kind::Param) && (e.param() == Param::G || e.param() == Param::G1)) {
      if (!is_log_base(level, e)) st.exact = false;
      return num(1);
    }
    return log(e, level);
  }
  switch (e.kind()) {
    case Kind::Var: return Expr::node(Kind::Log, {e}, level);
    case Kind::Neg: throw NotInFragment("logarithm of negative value " + render(e));
    case Kind::Mul: {
      std::vector<Expr> parts;
      for (const auto& f : e.args()) parts.push_back(log_level(f, level, st));
      return build_add(parts);
    }
    case Kind::Pow:
    case Kind::Exp: return build_mul({e.arg(1), log_level(e.arg(0), level, st)});
    case Kind::Add: {
      const Expr* best = nullptr;
      for (const auto& t : e.args()) {
        if (t.is(Kind::Neg) || (t.is_const() && t.value() < 0)) continue;
        if (!best || compare_growth(t, *best) > 0) best = &t;
      }
      if (!best) throw NotInFragment("logarithm of a sum with no positive dominant term: " + render(e));
      for (const auto& t : e.args())
        if (&t != best && (t.is(Kind::Neg) || (t.is_const() && t.value() < 0)) && compare_growth(t.is(Kind::Neg) ? t.arg(0) : num(1), *best) >= 0)
          throw NotInFragment("negative summand is not dominated in " + render(e));
      st.exact = false;
      return log_level(*best, level, st);
    }
    case Kind::Ln:
    case Kind::Log: {
      // ln a and log a differ by a constant factor whose log is dropped.
      if (e.is(Kind::Ln) || e.level() != level) st.exact = false;
      const Expr& a = e.arg(0);
      if (a == x()) return Expr::node(Kind::Log, {Expr::node(Kind::Log, {a}, level)}, level);
      GrainState inner;
      Expr la = log_level(a, level, inner);
      if (!inner.exact) st.exact = false;
      // Nothing simplified: the result is a deeper log nest, left for to_poly to reject.
      if (la.is(Kind::Log) && la.arg(0) == a) return Expr::node(Kind::Log, {e}, level);
      return log_level(la, level, st);
    }
    default: break;
  }
  throw NotInFragment("cannot take the logarithm of " + render(e));
}

}  // namespace detail

/// Applies k logarithms (k <= 2) to `e`, or to its derivative when
/// `use_derivative` is set, and normalizes into the log-polynomial fragment.
inline GrainForm grain(const Expr& e, int k, Mode mode, bool use_derivative = false) {
  if (k < 0 || k > kMaxGranularity) throw DomainError("granularity k must be in [0, 2]");
  Expr cur = use_derivative ? differentiate(e) : simplify(e);
  detail::GrainState st;
  for (int level = 0; level < k; ++level) cur = simplify(detail::log_level(cur, level, st));
  return detail::finish(cur, mode, k, std::move(st));
}

/// Expression whose value is the grain's sum (inv(x) read as 1/x).
inline Expr grain_expr(const GrainForm& gf) {
  Expr acc = num(0);
  const Expr lx = Expr::node(Kind::Log, {x()}, 0);
  const Expr l2x = Expr::node(Kind::Log, {lx}, 0);
  for (const auto& t : gf.terms) {
    Expr term = detail::npoly_expr(t.coeff) * pow(x(), detail::npoly_expr(t.mono.x - t.mono.invx)) *
                pow(lx, detail::npoly_expr(t.mono.logx)) * pow(l2x, detail::npoly_expr(t.mono.log2x));
    acc = acc + term;
  }
  return simplify(acc);
}

/// One further logarithm applied to an existing grain.
inline GrainForm grain_once(const GrainForm& gf) {
  if (gf.k >= kMaxGranularity) throw DomainError("granularity k must be in [0, 2]");
  detail::GrainState st{{}, gf.exact};
  Expr cur = simplify(detail::log_level(grain_expr(gf), gf.k, st));
  return detail::finish(cur, gf.mode, gf.k + 1, std::move(st));
}

}  // namespace agr
