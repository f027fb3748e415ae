#pragma once

#include "agr/expr.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace agr {

/// Numeric evaluation context. All values must be positive; n integral.
struct Bindings {
  double x = 1.0;
  std::optional<double> y;
  double g = 2.0;
  long long n = 5;
  double g1 = 3.0;
};

namespace detail {

inline Expr derive(const Expr& e, const std::string& path) {
  switch (e.kind()) {
    case Kind::Const:
    case Kind::Param: return num(0);
    case Kind::Var: return num(e.sym() == Sym::X ? 1 : 0);
    case Kind::Neg: return -derive(e.arg(0), path + "/neg");
    case Kind::Add: {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < e.args().size(); ++i)
        terms.push_back(derive(e.arg(i), path + "/add[" + std::to_string(i) + "]"));
      return build_add(terms);
    }
    case Kind::Mul: {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        std::vector<Expr> factors = e.args();
        factors[i] = derive(e.arg(i), path + "/mul[" + std::to_string(i) + "]");
        terms.push_back(build_mul(factors));
      }
      return build_add(terms);
    }
    case Kind::Pow: {
      const Expr& b = e.arg(0);
      const Expr& k = e.arg(1);
      return k * pow(b, k - num(1)) * derive(b, path + "/pow.base");
    }
    case Kind::Exp: {
      const Expr& b = e.arg(0);
      const Expr& k = e.arg(1);
      if (b.is_const() && b.value() <= 0) throw UnsupportedNode("non-positive constant base at " + path);
      Expr db = derive(b, path + "/exp.base");
      Expr dk = derive(k, path + "/exp.exponent");
      return e * (dk * ln(b) + k * db / b);
    }
    case Kind::Ln: {
      const Expr& a = e.arg(0);
      if (a.is_const() && a.value() <= 0) throw UnsupportedNode("ln of non-positive constant at " + path);
      return derive(a, path + "/ln") / a;
    }
    case Kind::Log: {
      const Expr& a = e.arg(0);
      if (a.is_const() && a.value() <= 0) throw UnsupportedNode("log of non-positive constant at " + path);
      Expr base = e.level() == 0 ? g() : g1();
      return derive(a, path + "/log") / (a * ln(base));
    }
  }
  throw UnsupportedNode("unknown node at " + path);
}

/// Value carried as sign and log2 of magnitude so x^x at large x stays finite.
struct SignedLog {
  int sign = 0;  // -1, 0, +1
  double log2 = 0.0;

  static SignedLog of(double v) {
    if (v == 0.0) return {0, 0.0};
    return {v > 0 ? 1 : -1, std::log2(std::fabs(v))};
  }
  double linear() const { return sign == 0 ? 0.0 : sign * std::exp2(log2); }
};

inline SignedLog add(SignedLog a, SignedLog b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  if (a.log2 < b.log2) std::swap(a, b);
  const double d = std::exp2(b.log2 - a.log2);
  if (a.sign == b.sign) return {a.sign, a.log2 + std::log1p(d) / std::log(2.0)};
  if (d == 1.0) return {0, 0.0};
  return {a.sign, a.log2 + std::log1p(-d) / std::log(2.0)};
}

inline double param_value(const Expr& e, const Bindings& b) {
  switch (e.param()) {
    case Param::G: return b.g;
    case Param::N: return static_cast<double>(b.n);
    case Param::G1: return b.g1;
  }
  return 0.0;
}

inline double var_value(const Expr& e, const Bindings& b) {
  if (e.sym() == Sym::X) return b.x;
  if (!b.y) throw EvaluationError("no value bound for y");
  return *b.y;
}

double eval_linear(const Expr& e, const Bindings& b);

inline SignedLog eval_log(const Expr& e, const Bindings& b) {
  switch (e.kind()) {
    case Kind::Const: return SignedLog::of(static_cast<double>(e.value()));
    case Kind::Param: return SignedLog::of(param_value(e, b));
    case Kind::Var: return SignedLog::of(var_value(e, b));
    case Kind::Neg: {
      SignedLog v = eval_log(e.arg(0), b);
      v.sign = -v.sign;
      return v;
    }
    case Kind::Add: {
      SignedLog acc;
      for (const auto& t : e.args()) acc = add(acc, eval_log(t, b));
      return acc;
    }
    case Kind::Mul: {
      SignedLog acc{1, 0.0};
      for (const auto& f : e.args()) {
        SignedLog v = eval_log(f, b);
        acc.sign *= v.sign;
        acc.log2 += v.log2;
        if (acc.sign == 0) return {0, 0.0};
      }
      return acc;
    }
    case Kind::Pow:
    case Kind::Exp: {
      SignedLog base = eval_log(e.arg(0), b);
      const double k = eval_linear(e.arg(1), b);
      if (base.sign == 0) {
        if (k <= 0) throw EvaluationError("zero raised to non-positive power");
        return {0, 0.0};
      }
      int sign = 1;
      if (base.sign < 0) {
        if (k != std::floor(k)) throw EvaluationError("negative base with non-integer exponent");
        sign = std::fmod(std::fabs(k), 2.0) == 1.0 ? -1 : 1;
      }
      return {sign, k * base.log2};
    }
    case Kind::Ln:
    case Kind::Log: {
      SignedLog a = eval_log(e.arg(0), b);
      if (a.sign <= 0) throw EvaluationError("logarithm of non-positive value");
      double base_log2 = std::log2(std::exp(1.0));
      if (e.is(Kind::Log)) base_log2 = std::log2(e.level() == 0 ? b.g : b.g1);
      return SignedLog::of(a.log2 / base_log2);
    }
  }
  throw EvaluationError("unknown node");
}

inline double eval_linear(const Expr& e, const Bindings& b) {
  switch (e.kind()) {
    case Kind::Const: return static_cast<double>(e.value());
    case Kind::Param: return param_value(e, b);
    case Kind::Var: return var_value(e, b);
    case Kind::Neg: return -eval_linear(e.arg(0), b);
    case Kind::Add: {
      double s = 0.0;
      for (const auto& t : e.args()) s += eval_linear(t, b);
      return s;
    }
    case Kind::Mul: {
      double p = 1.0;
      for (const auto& f : e.args()) p *= eval_linear(f, b);
      return p;
    }
    case Kind::Pow:
    case Kind::Exp: {
      const double base = eval_linear(e.arg(0), b);
      const double k = eval_linear(e.arg(1), b);
      if (base == 0.0 && k <= 0) throw EvaluationError("zero raised to non-positive power");
      if (base < 0 && k != std::floor(k)) throw EvaluationError("negative base with non-integer exponent");
      return std::pow(base, k);
    }
    case Kind::Ln: {
      const double a = eval_linear(e.arg(0), b);
      if (a <= 0) throw EvaluationError("ln of non-positive value");
      return std::log(a);
    }
    case Kind::Log: {
      const double a = eval_linear(e.arg(0), b);
      if (a <= 0) throw EvaluationError("log of non-positive value");
      return std::log(a) / std::log(e.level() == 0 ? b.g : b.g1);
    }
  }
  throw EvaluationError("unknown node");
}

}  // namespace detail

/// Exact symbolic derivative in x, simplified.
inline Expr differentiate(const Expr& e) { return simplify(detail::derive(e, "")); }

/// Numeric value of `e`. With `log_domain` the result is log2 of the value,
/// which must then be positive; this keeps x^x finite far past double range.
inline double evaluate(const Expr& e, const Bindings& b, bool log_domain = false) {
  if (b.x <= 0 || b.g <= 0 || b.g1 <= 0 || b.n <= 0 || (b.y && *b.y <= 0))
    throw EvaluationError("bindings must be positive");
  if (log_domain) {
    detail::SignedLog v = detail::eval_log(e, b);
    if (v.sign <= 0) throw EvaluationError("log-domain value is not positive");
    return v.log2;
  }
  const double v = detail::eval_linear(e, b);
  if (!std::isfinite(v)) throw EvaluationError("overflow evaluating " + render(e));
  return v;
}

/// Derivative of the inverse function, written in y (with x kept as the
/// implicit solution symbol for x^x). Supports x^c, b^x and x^x.
inline Expr inverse_rate(const Expr& e) {
  const Expr s = simplify(e);
  const Expr Y = y();
  if (s.is(Kind::Pow) && s.arg(0).is(Kind::Var) && s.arg(0).sym() == Sym::X && !contains_var(s.arg(1))) {
    const Expr& k = s.arg(1);
    return simplify(pow(Y, num(1) / k) / (k * Y));
  }
  if (s.is(Kind::Exp) && !contains_var(s.arg(0)) && s.arg(1) == x()) {
    return simplify(num(1) / (Y * ln(s.arg(0))));
  }
  if (s.is(Kind::Exp) && s.arg(0) == x() && s.arg(1) == x()) {
    return simplify(num(1) / (Y * (ln(x()) + num(1))));
  }
  throw UnsupportedNode("no inverse rate for " + render(s));
}

}  // namespace agr
