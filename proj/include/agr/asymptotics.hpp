#pragma once

// Limit classification of grain ratios and the resulting hardness verdicts.
//
// Continuous mode uses the strict order x > log x > log log x > 1 > 1/x.
// Discrete mode additionally enumerates how the oscillating atoms may behave
// as x runs up to phi^k(p): log x either stays o(x) or tracks x, and a
// modular inverse inv(x) either stays bounded (taken at its floor 1) or
// grows without bound. Per-case limits are aggregated by convex hull.

#include "agr/granularity.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace agr {

enum class Atom { X, LogX, Log2X, InvX };

inline std::string to_string(Atom a) {
  switch (a) {
    case Atom::X: return "x";
    case Atom::LogX: return "log x";
    case Atom::Log2X: return "log^2 x";
    case Atom::InvX: return "inv(x)";
  }
  return "?";
}

/// Endpoint of an oscillation range: 0, a positive constant, or infinity.
struct Bound {
  enum class Kind { Zero, Const, Infinity } kind = Kind::Zero;
  NFrac value;

  static Bound zero() { return {Kind::Zero, NFrac(0)}; }
  static Bound constant(NFrac v) { return {Kind::Const, std::move(v)}; }
  static Bound infinity() { return {Kind::Infinity, NFrac(0)}; }

  std::string str() const {
    switch (kind) {
      case Kind::Zero: return "0";
      case Kind::Const: return value.str();
      case Kind::Infinity: return "inf";
    }
    return "?";
  }
  friend bool operator==(const Bound& a, const Bound& b) {
    return a.kind == b.kind && (a.kind != Kind::Const || a.value == b.value);
  }
};

struct Tendency {
  enum class Kind { ToZero, ToConst, ToInfinity, Oscillates } kind = Kind::ToZero;
  NFrac value;  // ToConst
  Bound lo;     // Oscillates
  Bound hi;

  friend bool operator==(const Tendency& a, const Tendency& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::ToConst) return a.value == b.value;
    if (a.kind == Kind::Oscillates) return a.lo == b.lo && a.hi == b.hi;
    return true;
  }
};

/// Limit of one tendency case.
struct CaseLimit {
  enum class Kind { Zero, Const, Infinity } kind = Kind::Zero;
  NFrac value;

  std::string str() const {
    switch (kind) {
      case Kind::Zero: return "0";
      case Kind::Const: return value.str();
      case Kind::Infinity: return "inf";
    }
    return "?";
  }
};

struct CaseTrace {
  std::string assignment;
  CaseLimit limit;
};

struct LimitVerdict {
  enum class Kind { Zero, Const, ConstInterval, Infinity, OscZeroConst, OscConstInf } kind = Kind::Zero;
  NFrac value;  // Const, OscZeroConst (upper end), OscConstInf (lower end)
  NFrac lo;     // ConstInterval
  NFrac hi;
  std::vector<CaseTrace> cases;
};

inline std::string to_string(LimitVerdict::Kind k) {
  using K = LimitVerdict::Kind;
  switch (k) {
    case K::Zero: return "Zero";
    case K::Const: return "Const";
    case K::ConstInterval: return "ConstInterval";
    case K::Infinity: return "Infinity";
    case K::OscZeroConst: return "OscZeroConst";
    case K::OscConstInf: return "OscConstInf";
  }
  return "?";
}

enum class Verdict { Easier, Equivalent, Harder, EasierOrEquivalent, EquivalentOrNoSolution };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Easier: return "Easier";
    case Verdict::Equivalent: return "Equivalent";
    case Verdict::Harder: return "Harder";
    case Verdict::EasierOrEquivalent: return "EasierOrEquivalent";
    case Verdict::EquivalentOrNoSolution: return "EquivalentOrNoSolution";
  }
  return "?";
}

inline bool is_oscillating(Verdict v) {
  return v == Verdict::EasierOrEquivalent || v == Verdict::EquivalentOrNoSolution;
}

struct ComparisonResult {
  Verdict verdict = Verdict::Equivalent;
  int k = 0;
  Mode mode = Mode::Continuous;
  LimitVerdict limit;
  GrainForm grain_f;
  GrainForm grain_h;
};

namespace detail {

/// Growth of a term after a tendency case has been substituted: an exponent
/// for an unbounded modular inverse, which is independent of x, and the
/// lexicographic (x, log x, log log x) degrees.
struct Growth {
  NPoly inv;
  NPoly x;
  NPoly logx;
  NPoly log2x;

  friend bool operator==(const Growth&, const Growth&) = default;
  friend Growth operator-(const Growth& a, const Growth& b) {
    return {a.inv - b.inv, a.x - b.x, a.logx - b.logx, a.log2x - b.log2x};
  }
};

inline int certified_sign(const NPoly& p) {
  auto s = p.sign();
  if (!s) throw IndeterminateForm("sign of " + p.str() + " depends on n");
  return *s;
}

/// +1 / -1 / 0, or nullopt when the two growths are incomparable.
inline std::optional<int> growth_sign(const Growth& d) {
  int lex = certified_sign(d.x);
  if (lex == 0) lex = certified_sign(d.logx);
  if (lex == 0) lex = certified_sign(d.log2x);
  const int u = certified_sign(d.inv);
  if (u == 0) return lex;
  if (lex == 0 || lex == u) return u;
  return std::nullopt;
}

struct Case {
  bool log_tracks_x = false;     // discrete: log x behaves like x
  bool inverse_unbounded = false;  // discrete: inv(x) grows without bound
  std::string label;
};

inline Growth substitute(const Monomial& m, Mode mode, const Case& c) {
  if (mode == Mode::Continuous) return {NPoly(0), m.x - m.invx, m.logx, m.log2x};
  Growth g{NPoly(0), m.x, m.logx, m.log2x};
  if (c.log_tracks_x) {
    g.x += m.logx;
    g.logx = m.log2x;
    g.log2x = NPoly(0);
  }
  if (c.inverse_unbounded) g.inv = m.invx;
  return g;
}

struct GrowthTerm {
  NPoly coeff;
  Growth growth;
};

inline std::vector<GrowthTerm> collect(const std::vector<GrainTerm>& terms, Mode mode, const Case& c) {
  std::vector<GrowthTerm> out;
  for (const auto& t : terms) {
    Growth g = substitute(t.mono, mode, c);
    auto it = std::find_if(out.begin(), out.end(), [&](const GrowthTerm& o) { return o.growth == g; });
    if (it == out.end()) out.push_back({t.coeff, g});
    else it->coeff += t.coeff;
  }
  std::erase_if(out, [](const GrowthTerm& t) { return t.coeff.is_zero(); });
  return out;
}

inline std::vector<GrowthTerm> maximal(const std::vector<GrowthTerm>& ts) {
  std::vector<GrowthTerm> out;
  for (const auto& t : ts) {
    bool dominated = false;
    for (const auto& o : ts) {
      auto s = growth_sign(o.growth - t.growth);
      if (s && *s > 0) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(t);
  }
  return out;
}

inline bool is_unbounded(const Growth& g) {
  auto s = growth_sign(g);
  if (!s) throw IndeterminateForm("growth of a term is not comparable with a constant");
  return *s > 0;
}

/// Limit of num/den for single leading terms. When both sides are unbounded
/// the sign of each grain matters: a grain tending to -infinity belongs to a
/// derivative that decays, which is the easier side.
inline CaseLimit lead_ratio(const GrowthTerm& a, const GrowthTerm& b) {
  auto rel = growth_sign(a.growth - b.growth);
  if (!rel) throw IndeterminateForm("leading terms are incomparable");
  const int sa = certified_sign(a.coeff);
  const int sb = certified_sign(b.coeff);
  const bool ua = is_unbounded(a.growth);
  const bool ub = is_unbounded(b.growth);
  if (ua && ub && sa != sb) return {sa < 0 ? CaseLimit::Kind::Zero : CaseLimit::Kind::Infinity, {}};
  int dir = *rel;
  if (ua && ub && sa < 0) dir = -dir;
  if (dir > 0) return {CaseLimit::Kind::Infinity, {}};
  if (dir < 0) return {CaseLimit::Kind::Zero, {}};
  NFrac c(a.coeff, b.coeff);
  if (certified_sign(c.num()) * certified_sign(c.den()) < 0) c = -c;
  return {CaseLimit::Kind::Const, c};
}

inline CaseLimit case_limit(const std::vector<GrainTerm>& num, const std::vector<GrainTerm>& den, Mode mode,
                            const Case& c) {
  auto nt = collect(num, mode, c);
  auto dt = collect(den, mode, c);
  if (nt.empty() && dt.empty()) return {CaseLimit::Kind::Const, NFrac(1)};
  if (nt.empty()) return {CaseLimit::Kind::Zero, {}};
  if (dt.empty()) return {CaseLimit::Kind::Infinity, {}};
  auto nm = maximal(nt);
  auto dm = maximal(dt);
  if (nm.size() == 1 && dm.size() == 1) return lead_ratio(nm.front(), dm.front());
  // Several incomparable leading terms: only decidable when every pairing
  // agrees on 0 or infinity and all of them are positive.
  std::optional<CaseLimit::Kind> agreed;
  for (const auto& a : nm)
    for (const auto& b : dm) {
      if (certified_sign(a.coeff) <= 0 || certified_sign(b.coeff) <= 0)
        throw IndeterminateForm("incomparable leading terms with mixed signs");
      CaseLimit l = lead_ratio(a, b);
      if (l.kind == CaseLimit::Kind::Const || (agreed && *agreed != l.kind))
        throw IndeterminateForm("incomparable leading terms disagree");
      agreed = l.kind;
    }
  return {*agreed, {}};
}

inline bool has_atom(const std::vector<GrainTerm>& ts, bool log_atom) {
  return std::any_of(ts.begin(), ts.end(), [&](const GrainTerm& t) {
    return log_atom ? !(t.mono.logx.is_zero() && t.mono.log2x.is_zero()) : !t.mono.invx.is_zero();
  });
}

/// At granularity 0 in discrete mode both sides are field elements, so the
/// ratio is a product with a modular inverse: x^a / x^b keeps x^(a-b) when
/// a >= b and otherwise becomes inv(x)^b * x^a. Only identical monomials
/// cancel outright.
inline std::vector<GrainTerm> modular_divide(const std::vector<GrainTerm>& ts, const GrainTerm& lead) {
  const bool pure = lead.mono.logx.is_zero() && lead.mono.log2x.is_zero() && lead.mono.invx.is_zero();
  std::vector<GrainTerm> out;
  for (const auto& t : ts) {
    const NFrac c(t.coeff, lead.coeff);
    if (!c.den().is_constant())
      throw IndeterminateForm("modular division by a symbolic coefficient " + lead.coeff.str());
    GrainTerm q{c.num(), t.mono};
    if (t.mono == lead.mono) q.mono = Monomial{};
    else if (!pure) throw IndeterminateForm("modular division needs a pure power of x as the leading denominator term");
    else if (certified_sign(t.mono.x - lead.mono.x) >= 0) q.mono.x = t.mono.x - lead.mono.x;
    else q.mono.invx = t.mono.invx + lead.mono.x;
    out.push_back(q);
  }
  return out;
}

inline int compare_bound(const CaseLimit& a, const CaseLimit& b) {
  auto rank = [](const CaseLimit& c) { return c.kind == CaseLimit::Kind::Zero ? 0 : c.kind == CaseLimit::Kind::Const ? 1 : 2; };
  if (rank(a) != rank(b)) return rank(a) < rank(b) ? -1 : 1;
  if (a.kind != CaseLimit::Kind::Const) return 0;
  auto c = compare(a.value, b.value);
  if (!c) throw IndeterminateForm("order of " + a.value.str() + " and " + b.value.str() + " depends on n");
  return *c;
}

}  // namespace detail

/// Classifies lim num/den. Both forms must share k and mode.
inline LimitVerdict classify_ratio(const GrainForm& num_form, const GrainForm& den_form, Mode mode) {
  using namespace detail;
  if (num_form.k != den_form.k) throw DomainError("grain forms have different k");
  std::vector<GrainTerm> num = normalize_grain(num_form).terms;
  std::vector<GrainTerm> den = normalize_grain(den_form).terms;
  const bool identical = num == den;
  if (mode == Mode::Discrete && num_form.k == 0 && !(num.empty() && den.empty())) {
    // Both sides are divided by the same dominant leading term, so swapping
    // num and den yields the reciprocal limit.
    GrainTerm lead = den.empty() ? num.front() : den.front();
    if (!num.empty() && !den.empty() && dominance(num.front().mono, den.front().mono) > 0) lead = num.front();
    num = modular_divide(num, lead);
    den = modular_divide(den, lead);
  }

  std::vector<Case> cases;
  if (mode == Mode::Continuous) {
    cases.push_back({false, false, "x -> inf"});
  } else {
    const bool logs = has_atom(num, true) || has_atom(den, true);
    const bool invs = has_atom(num, false) || has_atom(den, false);
    for (int l = 0; l < (logs ? 2 : 1); ++l)
      for (int i = 0; i < (invs ? 2 : 1); ++i) {
        std::string label = "x -> phi^k(p) -> inf";
        if (logs) label += l ? "; log x ~ x" : "; log x = o(x)";
        if (invs) label += i ? "; inv(x) -> inf" : "; inv(x) -> 1";
        cases.push_back({l == 1, i == 1, label});
      }
  }

  LimitVerdict out;
  for (const auto& c : cases)
    out.cases.push_back({c.label, identical ? CaseLimit{CaseLimit::Kind::Const, NFrac(1)} : case_limit(num, den, mode, c)});

  const CaseLimit* lo = &out.cases.front().limit;
  const CaseLimit* hi = lo;
  for (const auto& tr : out.cases) {
    if (compare_bound(tr.limit, *lo) < 0) lo = &tr.limit;
    if (compare_bound(tr.limit, *hi) > 0) hi = &tr.limit;
  }
  using LK = LimitVerdict::Kind;
  using CK = CaseLimit::Kind;
  if (compare_bound(*lo, *hi) == 0) {
    out.kind = lo->kind == CK::Zero ? LK::Zero : lo->kind == CK::Infinity ? LK::Infinity : LK::Const;
    if (out.kind == LK::Const) out.value = lo->value;
  } else if (lo->kind == CK::Zero && hi->kind == CK::Const) {
    out.kind = LK::OscZeroConst;
    out.value = hi->value;
  } else if (lo->kind == CK::Const && hi->kind == CK::Infinity) {
    out.kind = LK::OscConstInf;
    out.value = lo->value;
  } else if (lo->kind == CK::Const && hi->kind == CK::Const) {
    out.kind = LK::ConstInterval;
    out.lo = lo->value;
    out.hi = hi->value;
  } else {
    throw IndeterminateForm("tendency cases span both 0 and infinity");
  }
  return out;
}

inline Verdict verdict_for(const LimitVerdict& l) {
  using K = LimitVerdict::Kind;
  switch (l.kind) {
    case K::Zero: return Verdict::Easier;
    case K::Const:
    case K::ConstInterval: return Verdict::Equivalent;
    case K::Infinity: return Verdict::Harder;
    case K::OscZeroConst: return Verdict::EasierOrEquivalent;
    case K::OscConstInf: return Verdict::EquivalentOrNoSolution;
  }
  return Verdict::Equivalent;
}

/// Tendency of a single atom.
inline Tendency atom_tendency(Atom a, Mode mode) {
  using TK = Tendency::Kind;
  if (mode == Mode::Continuous) {
    if (a == Atom::InvX) return {TK::ToZero, {}, {}, {}};
    return {TK::ToInfinity, {}, {}, {}};
  }
  // Discrete: x runs up to phi^k(p); logs and modular inverses are integers
  // in [1, phi^k(p) - 1] with no monotone relation to x.
  if (a == Atom::X) return {TK::ToInfinity, {}, {}, {}};
  return {TK::Oscillates, {}, Bound::constant(1), Bound::infinity()};
}

/// Tendency of the ratio of two monomials, e.g. log x / x.
inline Tendency ratio_tendency(const Monomial& num_m, const Monomial& den_m, Mode mode) {
  using TK = Tendency::Kind;
  using LK = LimitVerdict::Kind;
  GrainForm a{mode, 1, {{NPoly(1), num_m}}, {}, true};
  GrainForm b{mode, 1, {{NPoly(1), den_m}}, {}, true};
  LimitVerdict l = classify_ratio(a, b, mode);
  switch (l.kind) {
    case LK::Zero: return {TK::ToZero, {}, {}, {}};
    case LK::Infinity: return {TK::ToInfinity, {}, {}, {}};
    case LK::Const: return {TK::ToConst, l.value, {}, {}};
    case LK::ConstInterval: return {TK::Oscillates, {}, Bound::constant(l.lo), Bound::constant(l.hi)};
    case LK::OscZeroConst: return {TK::Oscillates, {}, Bound::zero(), Bound::constant(l.value)};
    case LK::OscConstInf: return {TK::Oscillates, {}, Bound::constant(l.value), Bound::infinity()};
  }
  return {};
}

/// Compares the inversion difficulty of f against h. With no k, the smallest
/// k in {0, 1, 2} at which both grains lie in the fragment is used.
inline ComparisonResult agr_compare(const Expr& f, const Expr& h, Mode mode, std::optional<int> k = std::nullopt,
                                    bool use_derivative = false) {
  std::optional<GrainForm> gf;
  std::optional<GrainForm> gh;
  if (k) {
    gf = grain(f, *k, mode, use_derivative);
    gh = grain(h, *k, mode, use_derivative);
  } else {
    std::string last;
    for (int kk = 0; kk <= kMaxGranularity && !gf; ++kk) {
      try {
        GrainForm a = grain(f, kk, mode, use_derivative);
        GrainForm b = grain(h, kk, mode, use_derivative);
        gf = std::move(a);
        gh = std::move(b);
      } catch (const NotInFragment& err) {
        last = err.what();
      }
    }
    if (!gf) throw NotInFragment("no granularity k <= 2 brings both sides into the fragment (" + last + ")");
  }
  ComparisonResult r;
  r.k = gf->k;
  r.mode = mode;
  r.limit = classify_ratio(*gf, *gh, mode);
  r.verdict = verdict_for(r.limit);
  r.grain_f = std::move(*gf);
  r.grain_h = std::move(*gh);
  return r;
}

/// Equivalence classes in ascending difficulty. Every pair must be decided
/// by a non-oscillating verdict, and the verdicts must form a total preorder.
/// Without an explicit k the whole list shares one granularity.
inline std::vector<std::vector<Expr>> rank_difficulty(const std::vector<Expr>& fs, Mode mode,
                                                      std::optional<int> k = std::nullopt,
                                                      bool use_derivative = false) {
  const std::size_t m = fs.size();
  // One granularity for the whole ranking: the smallest k at which every
  // input lies in the fragment, so all pairs are measured on the same scale.
  if (!k) {
    for (int kk = 0; kk <= kMaxGranularity && !k; ++kk) {
      bool all = true;
      for (const auto& f : fs) {
        try {
          grain(f, kk, mode, use_derivative);
        } catch (const NotInFragment&) {
          all = false;
          break;
        }
      }
      if (all) k = kk;
    }
    if (!k) throw NotInFragment("no granularity k <= 2 brings every input into the fragment");
  }
  std::vector<std::vector<Verdict>> v(m, std::vector<Verdict>(m, Verdict::Equivalent));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      v[i][j] = agr_compare(fs[i], fs[j], mode, k, use_derivative).verdict;
      if (is_oscillating(v[i][j]))
        throw UnorderablePair(render(fs[i]) + " vs " + render(fs[j]) + ": " + to_string(v[i][j]));
    }
  // Position = number of strictly easier elements.
  std::vector<std::size_t> below(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (v[i][j] == Verdict::Harder) ++below[i];
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return below[a] < below[b]; });
  std::vector<std::vector<Expr>> classes;
  std::vector<std::size_t> reps;
  for (std::size_t idx : order) {
    if (!reps.empty() && v[idx][reps.back()] == Verdict::Equivalent) {
      classes.back().push_back(fs[idx]);
    } else {
      classes.push_back({fs[idx]});
      reps.push_back(idx);
    }
  }
  // Consistency: the class order must agree with every pairwise verdict.
  std::vector<std::size_t> cls(m);
  for (std::size_t c = 0, pos = 0; c < classes.size(); ++c)
    for (std::size_t e = 0; e < classes[c].size(); ++e, ++pos) cls[order[pos]] = c;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const Verdict want = cls[i] == cls[j] ? Verdict::Equivalent : cls[i] < cls[j] ? Verdict::Easier : Verdict::Harder;
      if (v[i][j] != want)
        throw UnorderablePair(render(fs[i]) + " vs " + render(fs[j]) + ": verdicts are not a total preorder");
    }
  return classes;
}

}  // namespace agr
