#pragma once

// Symbolic expressions in one variable over the parameters g, g1 and n.
//
// Trees are immutable and shared; every public constructor path goes through
// simplify(), so two equal functions built the same way compare equal
// structurally.

#include "agr/errors.hpp"
#include "agr/npoly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace agr {

enum class Kind { Const, Param, Var, Neg, Add, Mul, Pow, Exp, Ln, Log };
enum class Param { G, N, G1 };

/// `X` is the function variable. `Y` only appears in inverse-function rates,
/// where it names the function value.
enum class Sym { X, Y };

class Expr;

namespace detail {
struct Node {
  Kind kind = Kind::Const;
  Rational value{};       // Const
  Param param{};          // Param
  Sym sym{};              // Var
  int level = 0;          // Log: 0 is base g, 1 is base g1
  std::vector<Expr> args{};
};
}  // namespace detail

class Expr {
 public:
  Expr() = default;

  Kind kind() const { return node_->kind; }
  const Rational& value() const { return node_->value; }
  Param param() const { return node_->param; }
  Sym sym() const { return node_->sym; }
  int level() const { return node_->level; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& arg(std::size_t i) const { return node_->args.at(i); }
  bool valid() const { return node_ != nullptr; }

  bool is(Kind k) const { return node_->kind == k; }
  bool is_const() const { return is(Kind::Const); }
  bool is_const(long long v) const { return is(Kind::Const) && node_->value == v; }
  bool is_integer() const { return is(Kind::Const) && boost::multiprecision::denominator(node_->value) == 1; }

  // Raw constructors; they do not canonicalize.
  static Expr constant(const Rational& v) { detail::Node n;
    n.value = v;
    return make(std::move(n)); }
  static Expr parameter(Param p) {
    detail::Node n;
    n.kind = Kind::Param;
    n.param = p;
    return make(std::move(n));
  }
  static Expr variable(Sym s = Sym::X) {
    detail::Node n;
    n.kind = Kind::Var;
    n.sym = s;
    return make(std::move(n));
  }
  static Expr node(Kind k, std::vector<Expr> args, int level = 0) {
    detail::Node n;
    n.kind = k;
    n.args = std::move(args);
    n.level = level;
    return make(std::move(n));
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.kind != y.kind || x.args.size() != y.args.size()) return false;
    switch (x.kind) {
      case Kind::Const: return x.value == y.value;
      case Kind::Param: return x.param == y.param;
      case Kind::Var: return x.sym == y.sym;
      case Kind::Log:
        if (x.level != y.level) return false;
        break;
      default: break;
    }
    for (std::size_t i = 0; i < x.args.size(); ++i)
      if (!(x.args[i] == y.args[i])) return false;
    return true;
  }

 private:
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  static Expr make(detail::Node n) { return Expr(std::make_shared<const detail::Node>(std::move(n))); }

  std::shared_ptr<const detail::Node> node_;
};

std::string render(const Expr& e);
Expr simplify(const Expr& e);

inline bool contains_var(const Expr& e, std::optional<Sym> which = std::nullopt) {
  if (e.is(Kind::Var)) return !which || e.sym() == *which;
  return std::any_of(e.args().begin(), e.args().end(), [&](const Expr& a) { return contains_var(a, which); });
}

namespace detail {

inline int kind_rank(Kind k) {
  switch (k) {
    case Kind::Const: return 0;
    case Kind::Param: return 1;
    case Kind::Var: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    case Kind::Exp: return 5;
    case Kind::Mul: return 6;
    case Kind::Add: return 7;
    case Kind::Ln: return 8;
    case Kind::Log: return 9;
  }
  return 10;
}

/// Canonical factor order: constants < parameters < variable < composite,
/// ties broken on the rendered text.
inline bool factor_less(const Expr& a, const Expr& b) {
  const int ra = kind_rank(a.kind());
  const int rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb;
  return render(a) < render(b);
}

/// Splits a term into its rational coefficient and the remaining factor
/// (null when the term is a pure constant).
inline std::pair<Rational, std::optional<Expr>> split_coeff(const Expr& e) {
  if (e.is_const()) return {e.value(), std::nullopt};
  if (e.is(Kind::Neg)) {
    auto [c, rest] = split_coeff(e.arg(0));
    return {-c, rest};
  }
  if (e.is(Kind::Mul) && e.arg(0).is_const()) {
    std::vector<Expr> rest(e.args().begin() + 1, e.args().end());
    if (rest.size() == 1) return {e.arg(0).value(), rest.front()};
    return {e.arg(0).value(), Expr::node(Kind::Mul, std::move(rest))};
  }
  return {Rational(1), e};
}

/// Sum terms are listed dominant-looking first: descending kind rank of the
/// coefficient-free part, then rendered text.
inline bool term_before(const Expr& a, const Expr& b) {
  auto ka = split_coeff(a).second;
  auto kb = split_coeff(b).second;
  const int ra = ka ? kind_rank(ka->kind()) : -1;
  const int rb = kb ? kind_rank(kb->kind()) : -1;
  if (ra != rb) return ra > rb;
  const std::string sa = ka ? render(*ka) : "";
  const std::string sb = kb ? render(*kb) : "";
  if (sa != sb) return sa < sb;
  return render(a) < render(b);
}

inline std::optional<Rational> rational_power(const Rational& base, const Rational& exp) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(exp) != 1) return std::nullopt;
  BigInt e = numerator(exp);
  if (base == 0) {
    if (e <= 0) return std::nullopt;
    return Rational(0);
  }
  if (boost::multiprecision::abs(e) > 4096) return std::nullopt;
  const bool invert = e < 0;
  if (invert) e = -e;
  Rational r = 1;
  Rational b = base;
  while (e > 0) {
    if ((e & 1) != 0) r *= b;
    b *= b;
    e >>= 1;
  }
  return invert ? Rational(1) / r : r;
}

Expr build_add(const std::vector<Expr>& terms);
Expr build_mul(const std::vector<Expr>& factors);
Expr build_pow(const Expr& base, const Expr& exponent);
Expr build_ln(const Expr& arg);
Expr build_log(int level, const Expr& arg);

inline Expr build_add(const std::vector<Expr>& terms) {
  std::vector<Expr> flat;
  std::vector<Expr> stack(terms.rbegin(), terms.rend());
  while (!stack.empty()) {
    Expr t = stack.back();
    stack.pop_back();
    if (t.is(Kind::Add)) {
      for (auto it = t.args().rbegin(); it != t.args().rend(); ++it) stack.push_back(*it);
    } else if (t.is(Kind::Neg) && t.arg(0).is(Kind::Add)) {
      for (auto it = t.arg(0).args().rbegin(); it != t.arg(0).args().rend(); ++it)
        stack.push_back(build_mul({Expr::constant(-1), *it}));
    } else {
      flat.push_back(t);
    }
  }
  Rational constant = 0;
  std::vector<std::pair<Expr, Rational>> like;  // insertion order, keyed by rendering
  std::map<std::string, std::size_t> index;
  for (const auto& t : flat) {
    auto [c, rest] = split_coeff(t);
    if (!rest) {
      constant += c;
      continue;
    }
    const std::string key = render(*rest);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, like.size());
      like.emplace_back(*rest, c);
    } else {
      like[it->second].second += c;
    }
  }
  std::vector<Expr> out;
  for (const auto& [rest, c] : like) {
    if (c == 0) continue;
    out.push_back(c == 1 ? rest : build_mul({Expr::constant(c), rest}));
  }
  if (constant != 0) out.push_back(Expr::constant(constant));
  if (out.empty()) return Expr::constant(0);
  if (out.size() == 1) return out.front();
  std::sort(out.begin(), out.end(), term_before);
  return Expr::node(Kind::Add, std::move(out));
}

/// Peels nested powers so x^2 and (x^2)^3 share the base x.
inline std::pair<Expr, Expr> base_and_exponent(const Expr& f) {
  if (f.is(Kind::Pow) || f.is(Kind::Exp)) {
    auto [b, e] = base_and_exponent(f.arg(0));
    if (e.is_const(1)) return {b, f.arg(1)};
    return {b, build_mul({e, f.arg(1)})};
  }
  return {f, Expr::constant(1)};
}

inline Expr build_mul(const std::vector<Expr>& factors) {
  Rational coeff = 1;
  std::vector<Expr> flat;
  std::vector<Expr> stack(factors.rbegin(), factors.rend());
  while (!stack.empty()) {
    Expr f = stack.back();
    stack.pop_back();
    if (f.is(Kind::Mul)) {
      for (auto it = f.args().rbegin(); it != f.args().rend(); ++it) stack.push_back(*it);
    } else if (f.is(Kind::Neg)) {
      coeff = -coeff;
      stack.push_back(f.arg(0));
    } else if (f.is_const()) {
      coeff *= f.value();
    } else {
      flat.push_back(f);
    }
  }
  if (coeff == 0) return Expr::constant(0);

  std::vector<std::pair<Expr, std::vector<Expr>>> groups;
  std::map<std::string, std::size_t> index;
  for (const auto& f : flat) {
    auto [b, e] = base_and_exponent(f);
    const std::string key = render(b);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, groups.size());
      groups.push_back({b, {e}});
    } else {
      groups[it->second].second.push_back(e);
    }
  }

  std::vector<Expr> out;
  for (const auto& [b, exps] : groups) {
    Expr e = build_add(exps);
    if (e.is_const(0)) continue;
    Expr p = e.is_const(1) ? b : build_pow(b, e);
    if (p.is_const()) {
      coeff *= p.value();
    } else if (p.is(Kind::Mul) || p.is(Kind::Neg)) {
      auto [c, rest] = split_coeff(p);
      coeff *= c;
      if (rest) {
        if (rest->is(Kind::Mul)) out.insert(out.end(), rest->args().begin(), rest->args().end());
        else out.push_back(*rest);
      }
    } else {
      out.push_back(p);
    }
  }
  if (coeff == 0) return Expr::constant(0);
  if (out.empty()) return Expr::constant(coeff);
  std::sort(out.begin(), out.end(), factor_less);
  const Rational mag = coeff < 0 ? Rational(-coeff) : coeff;
  if (mag != 1) out.insert(out.begin(), Expr::constant(mag));
  Expr body = out.size() == 1 ? out.front() : Expr::node(Kind::Mul, std::move(out));
  return coeff < 0 ? Expr::node(Kind::Neg, {body}) : body;
}

inline Expr build_pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_const(0)) return Expr::constant(1);
  if (exponent.is_const(1)) return base;
  if (base.is_const(1)) return Expr::constant(1);
  if (base.is(Kind::Pow) || (base.is(Kind::Exp) && !contains_var(exponent))) {
    return build_pow(base.arg(0), build_mul({base.arg(1), exponent}));
  }
  if (contains_var(exponent)) return Expr::node(Kind::Exp, {base, exponent});
  if (base.is_const() && exponent.is_const()) {
    if (auto r = rational_power(base.value(), exponent.value())) return Expr::constant(*r);
  }
  if (base.is(Kind::Mul)) {
    std::vector<Expr> parts;
    for (const auto& f : base.args()) parts.push_back(build_pow(f, exponent));
    return build_mul(parts);
  }
  if (base.is(Kind::Neg) && exponent.is_integer()) {
    Expr inner = build_pow(base.arg(0), exponent);
    const bool odd = (boost::multiprecision::numerator(exponent.value()) & 1) != 0;
    return odd ? build_mul({Expr::constant(-1), inner}) : inner;
  }
  return Expr::node(Kind::Pow, {base, exponent});
}

inline bool is_log_base(int level, const Expr& e) {
  return e.is(Kind::Param) && ((level == 0 && e.param() == Param::G) || (level == 1 && e.param() == Param::G1));
}

template <class Leaf>
Expr expand_log(const Expr& arg, Leaf leaf) {
  if (arg.is(Kind::Pow) || arg.is(Kind::Exp)) {
    return build_mul({arg.arg(1), expand_log(arg.arg(0), leaf)});
  }
  if (arg.is(Kind::Mul)) {
    std::vector<Expr> parts;
    for (const auto& f : arg.args()) parts.push_back(expand_log(f, leaf));
    return build_add(parts);
  }
  return leaf(arg);
}

inline Expr build_ln(const Expr& arg) {
  return expand_log(arg, [](const Expr& a) {
    if (a.is_const(1)) return Expr::constant(0);
    return Expr::node(Kind::Ln, {a});
  });
}

inline Expr build_log(int level, const Expr& arg) {
  return expand_log(arg, [level](const Expr& a) {
    if (a.is_const(1)) return Expr::constant(0);
    if (is_log_base(level, a)) return Expr::constant(1);
    return Expr::node(Kind::Log, {a}, level);
  });
}

inline Expr simplify_once(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const:
    case Kind::Param:
    case Kind::Var: return e;
    default: break;
  }
  std::vector<Expr> args;
  args.reserve(e.args().size());
  for (const auto& a : e.args()) args.push_back(simplify_once(a));
  switch (e.kind()) {
    case Kind::Neg: return build_mul({Expr::constant(-1), args[0]});
    case Kind::Add: return build_add(args);
    case Kind::Mul: return build_mul(args);
    case Kind::Pow:
    case Kind::Exp: return build_pow(args[0], args[1]);
    case Kind::Ln: return build_ln(args[0]);
    case Kind::Log: return build_log(e.level(), args[0]);
    default: return e;
  }
}

// ---- rendering ----

inline bool atomic(const Expr& e) {
  switch (e.kind()) {
    case Kind::Var:
    case Kind::Param:
    case Kind::Ln:
    case Kind::Log: return true;
    case Kind::Const: return e.is_integer() && e.value() >= 0;
    default: return false;
  }
}

inline std::string paren(const Expr& e) { return atomic(e) ? render(e) : "(" + render(e) + ")"; }

inline bool negative_const_exponent(const Expr& f) {
  return f.is(Kind::Pow) && f.arg(1).is_const() && f.arg(1).value() < 0;
}

inline std::string render_product(const std::vector<Expr>& factors) {
  std::vector<std::string> num;
  std::vector<std::string> den;
  auto product_piece = [](const Expr& f) {
    return (f.is(Kind::Add) || f.is(Kind::Neg) || (f.is_const() && !atomic(f))) ? "(" + render(f) + ")" : render(f);
  };
  for (const auto& f : factors) {
    if (f.is_const()) {
      const auto nu = boost::multiprecision::numerator(f.value());
      const auto de = boost::multiprecision::denominator(f.value());
      if (nu != 1) num.push_back(nu.str());
      if (de != 1) den.push_back(de.str());
    } else if (negative_const_exponent(f)) {
      Expr flipped = build_pow(f.arg(0), Expr::constant(-f.arg(1).value()));
      den.push_back(product_piece(flipped));
    } else {
      num.push_back(product_piece(f));
    }
  }
  auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "*" : "") + xs[i];
    return s;
  };
  std::string out = num.empty() ? "1" : join(num);
  if (den.size() == 1) out += "/" + den.front();
  else if (den.size() > 1) out += "/(" + join(den) + ")";
  return out;
}

inline std::string log_name(int level) { return level == 0 ? "log" : "log1"; }

}  // namespace detail

/// Canonical text: explicit '*', minimal parentheses, negative constant
/// exponents rendered as division.
inline std::string render(const Expr& e) {
  using namespace detail;
  switch (e.kind()) {
    case Kind::Const: return e.value().str();
    case Kind::Param:
      switch (e.param()) {
        case Param::G: return "g";
        case Param::N: return "n";
        case Param::G1: return "g1";
      }
      return "?";
    case Kind::Var: return e.sym() == Sym::X ? "x" : "y";
    case Kind::Neg: {
      const Expr& a = e.arg(0);
      return "-" + ((a.is(Kind::Add) || a.is(Kind::Neg)) ? "(" + render(a) + ")" : render(a));
    }
    case Kind::Add: {
      std::string out = render(e.arg(0));
      for (std::size_t i = 1; i < e.args().size(); ++i) {
        const Expr& t = e.arg(i);
        if (t.is(Kind::Neg)) {
          const Expr& a = t.arg(0);
          out += " - " + (a.is(Kind::Add) ? "(" + render(a) + ")" : render(a));
        } else if (t.is_const() && t.value() < 0) {
          out += " - " + Rational(-t.value()).str();
        } else {
          out += " + " + render(t);
        }
      }
      return out;
    }
    case Kind::Mul: return render_product(e.args());
    case Kind::Pow:
      if (negative_const_exponent(e)) return render_product({e});
      [[fallthrough]];
    case Kind::Exp: return paren(e.arg(0)) + "^" + paren(e.arg(1));
    case Kind::Ln: return "ln(" + render(e.arg(0)) + ")";
    case Kind::Log: return log_name(e.level()) + "(" + render(e.arg(0)) + ")";
  }
  return "?";
}

/// Canonical form: flattened sorted sums and products, like terms and equal
/// bases combined, exact constant folding. Iterated to a fixed point, so it
/// is idempotent.
inline Expr simplify(const Expr& e) {
  Expr cur = e;
  for (int i = 0; i < 16; ++i) {
    Expr next = detail::simplify_once(cur);
    if (next == cur) return next;
    cur = next;
  }
  return cur;
}

// ---- convenience builders (canonical) ----

inline Expr x() { return Expr::variable(Sym::X); }
inline Expr y() { return Expr::variable(Sym::Y); }
inline Expr g() { return Expr::parameter(Param::G); }
inline Expr g1() { return Expr::parameter(Param::G1); }
inline Expr n() { return Expr::parameter(Param::N); }
inline Expr num(const Rational& v) { return Expr::constant(v); }
inline Expr operator+(const Expr& a, const Expr& b) { return detail::build_add({a, b}); }
inline Expr operator-(const Expr& a, const Expr& b) { return detail::build_add({a, detail::build_mul({num(-1), b})}); }
inline Expr operator-(const Expr& a) { return detail::build_mul({num(-1), a}); }
inline Expr operator*(const Expr& a, const Expr& b) { return detail::build_mul({a, b}); }
inline Expr operator/(const Expr& a, const Expr& b) { return detail::build_mul({a, detail::build_pow(b, num(-1))}); }
inline Expr pow(const Expr& a, const Expr& b) { return detail::build_pow(a, b); }
inline Expr ln(const Expr& a) { return detail::build_ln(a); }
inline Expr log(const Expr& a, int level = 0) { return detail::build_log(level, a); }

// ---- parsing ----

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, bool allow_solution_symbol)
      : text_(text), allow_solution_symbol_(allow_solution_symbol) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (seen_x_ && seen_y_ && !allow_solution_symbol_)
      throw SyntaxError("multiple distinct variables (x and y)", first_y_);
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) terms.push_back(term());
      else if (accept('-')) terms.push_back(Expr::node(Kind::Neg, {term()}));
      else break;
    }
    return terms.size() == 1 ? terms.front() : Expr::node(Kind::Add, std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    for (;;) {
      if (accept('*')) factors.push_back(unary());
      else if (accept('/')) factors.push_back(Expr::node(Kind::Pow, {unary(), Expr::constant(-1)}));
      else break;
    }
    return factors.size() == 1 ? factors.front() : Expr::node(Kind::Mul, std::move(factors));
  }

  Expr unary() {
    if (accept('-')) return Expr::node(Kind::Neg, {unary()});
    return power();
  }

  // Right-associative: a^b^c is a^(b^c).
  Expr power() {
    Expr base = atom();
    if (accept('^')) {
      Expr exponent = unary();
      return Expr::node(contains_var(exponent) ? Kind::Exp : Kind::Pow, {base, exponent});
    }
    return base;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '.') fail("only integer literals are allowed");
      return Expr::constant(Rational(BigInt(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view id = text_.substr(start, pos_ - start);
      if (id == "x") {
        seen_x_ = true;
        return Expr::variable(Sym::X);
      }
      if (id == "y") {
        if (!seen_y_) first_y_ = start;
        seen_y_ = true;
        return Expr::variable(Sym::Y);
      }
      if (id == "g") return Expr::parameter(Param::G);
      if (id == "g1") return Expr::parameter(Param::G1);
      if (id == "n") return Expr::parameter(Param::N);
      if (id == "ln" || id == "log" || id == "log1") {
        expect('(');
        Expr a = expr();
        expect(')');
        if (id == "ln") return Expr::node(Kind::Ln, {a});
        return Expr::node(Kind::Log, {a}, id == "log" ? 0 : 1);
      }
      pos_ = start;
      if (id.size() == 1) fail("multiple distinct variables: only x (and y for inverse rates) are supported, got '" + std::string(id) + "'");
      fail("unknown identifier '" + std::string(id) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  bool allow_solution_symbol_;
  bool seen_x_ = false;
  bool seen_y_ = false;
  std::size_t first_y_ = 0;
};

}  // namespace detail

/// Parses and canonicalizes. Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?
///   atom   := x | y | g | g1 | n | INTEGER | '(' expr ')' | (ln|log|log1) '(' expr ')'
///
/// Mixing x and y is rejected unless `allow_solution_symbol` is set, which
/// admits inverse-rate forms such as 1/(y*(ln(x) + 1)).
inline Expr parse(std::string_view text, bool allow_solution_symbol = false) {
  return simplify(detail::Parser(text, allow_solution_symbol).parse());
}

}  // namespace agr
