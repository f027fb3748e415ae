#pragma once

// Exact coefficients that may depend on the symbolic parameter n (n >= 5).

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace agr {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Smallest value the parameter n may take.
inline constexpr int kMinN = 5;

inline std::string to_string(const Rational& r) {
  return r.str();
}

/// Polynomial in n with exact rational coefficients.
class NPoly {
 public:
  NPoly() = default;
  NPoly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) coeffs_[0] = c;
  }
  NPoly(long long c) : NPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static NPoly n() {
    NPoly p;
    p.coeffs_[1] = 1;
    return p;
  }

  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.empty() || (coeffs_.size() == 1 && coeffs_.begin()->first == 0); }
  int degree() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

  Rational constant() const {
    auto it = coeffs_.find(0);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }
  Rational coeff(int d) const {
    auto it = coeffs_.find(d);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }
  const std::map<int, Rational>& coeffs() const { return coeffs_; }

  friend NPoly operator+(const NPoly& a, const NPoly& b) {
    NPoly r = a;
    for (const auto& [d, c] : b.coeffs_) r.add_term(d, c);
    return r;
  }
  friend NPoly operator-(const NPoly& a) {
    NPoly r;
    for (const auto& [d, c] : a.coeffs_) r.coeffs_[d] = -c;
    return r;
  }
  friend NPoly operator-(const NPoly& a, const NPoly& b) { return a + (-b); }
  friend NPoly operator*(const NPoly& a, const NPoly& b) {
    NPoly r;
    for (const auto& [da, ca] : a.coeffs_)
      for (const auto& [db, cb] : b.coeffs_) r.add_term(da + db, ca * cb);
    return r;
  }
  NPoly& operator+=(const NPoly& o) { return *this = *this + o; }
  NPoly& operator-=(const NPoly& o) { return *this = *this - o; }
  NPoly& operator*=(const NPoly& o) { return *this = *this * o; }

  friend bool operator==(const NPoly& a, const NPoly& b) { return a.coeffs_ == b.coeffs_; }

  /// Lexicographic on (degree, coefficients); only used to order containers.
  friend bool operator<(const NPoly& a, const NPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (auto ia = a.coeffs_.rbegin(), ib = b.coeffs_.rbegin(); ia != a.coeffs_.rend() && ib != b.coeffs_.rend();
         ++ia, ++ib) {
      if (ia->first != ib->first) return ia->first < ib->first;
      if (ia->second != ib->second) return ia->second < ib->second;
    }
    return a.coeffs_.size() < b.coeffs_.size();
  }

  double evaluate(double n) const {
    double v = 0.0;
    for (const auto& [d, c] : coeffs_) v += static_cast<double>(c) * std::pow(n, d);
    return v;
  }

  /// Sign valid for every admissible n (n >= kMinN), or nullopt when the sign
  /// changes or cannot be certified. Uses the Taylor shift n = kMinN + m, m >= 0:
  /// if all shifted coefficients agree in sign, so does the polynomial.
  std::optional<int> sign() const {
    if (coeffs_.empty()) return 0;
    const int deg = degree();
    std::map<int, Rational> shifted;
    for (const auto& [d, c] : coeffs_) {
      // c * (m + kMinN)^d expanded with binomial coefficients.
      BigInt binom = 1;
      Rational pw = 1;
      for (int j = 0; j < d; ++j) pw *= kMinN;
      for (int j = 0; j <= d; ++j) {
        shifted[j] += c * Rational(binom) * pw;
        binom = binom * (d - j) / (j + 1);
        if (j < d) pw /= kMinN;
      }
    }
    int s = 0;
    for (int j = 0; j <= deg; ++j) {
      const Rational& c = shifted[j];
      if (c == 0) continue;
      const int cs = c > 0 ? 1 : -1;
      if (s == 0) s = cs;
      else if (s != cs) return std::nullopt;
    }
    return s;
  }

  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      const auto& [d, c] = *it;
      Rational mag = c < 0 ? Rational(-c) : c;
      if (first) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      first = false;
      std::string mono = d == 0 ? "" : (d == 1 ? "n" : "n^" + std::to_string(d));
      if (d == 0) out += to_string(mag);
      else if (mag == 1) out += mono;
      else out += to_string(mag) + "*" + mono;
    }
    return out;
  }

 private:
  void add_term(int d, const Rational& c) {
    Rational& slot = coeffs_[d];
    slot += c;
    if (slot == 0) coeffs_.erase(d);
  }

  std::map<int, Rational> coeffs_;
};

/// Quotient of two n-polynomials, used for limit constants such as n or
/// 2/(n - 1). The denominator is never the zero polynomial.
class NFrac {
 public:
  NFrac() : num_(0), den_(1) {}
  NFrac(NPoly num) : num_(std::move(num)), den_(1) {}  // NOLINT(google-explicit-constructor)
  NFrac(long long c) : NFrac(NPoly(c)) {}              // NOLINT(google-explicit-constructor)
  NFrac(NPoly num, NPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  const NPoly& num() const { return num_; }
  const NPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  std::optional<int> sign() const {
    auto a = num_.sign();
    auto b = den_.sign();
    if (!a || !b) return std::nullopt;
    return *a * *b;
  }

  friend NFrac operator*(const NFrac& a, const NFrac& b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
  friend NFrac operator/(const NFrac& a, const NFrac& b) { return {a.num_ * b.den_, a.den_ * b.num_}; }
  friend NFrac operator-(const NFrac& a) { return {-a.num_, a.den_}; }

  friend bool operator==(const NFrac& a, const NFrac& b) { return a.num_ * b.den_ == b.num_ * a.den_; }

  /// Certified three-way comparison over all admissible n; nullopt if the
  /// order depends on n.
  friend std::optional<int> compare(const NFrac& a, const NFrac& b) {
    auto s = (a.num_ * b.den_ - b.num_ * a.den_).sign();
    auto d = (a.den_ * b.den_).sign();
    if (!s || !d) return std::nullopt;
    return *s * *d;
  }

  double evaluate(double n) const { return num_.evaluate(n) / den_.evaluate(n); }

  std::string str() const {
    if (den_ == NPoly(1)) return num_.str();
    auto wrap = [](const NPoly& p) {
      std::string s = p.str();
      return (p.coeffs().size() > 1 || s.find('/') != std::string::npos) ? "(" + s + ")" : s;
    };
    return wrap(num_) + "/" + wrap(den_);
  }

 private:
  void normalize() {
    if (num_.is_zero()) {
      den_ = NPoly(1);
      return;
    }
    if (den_.is_constant()) {
      num_ *= NPoly(Rational(1) / den_.constant());
      den_ = NPoly(1);
      return;
    }
    // Collapse to a constant when num is a rational multiple of den.
    const int dd = den_.degree();
    if (num_.degree() == dd) {
      Rational k = num_.coeff(dd) / den_.coeff(dd);
      if (num_ == den_ * NPoly(k)) {
        num_ = NPoly(k);
        den_ = NPoly(1);
        return;
      }
    }
    // Make the denominator's leading coefficient 1.
    Rational lead = den_.coeff(dd);
    if (lead != 1) {
      NPoly inv(Rational(1) / lead);
      num_ *= inv;
      den_ *= inv;
    }
  }

  NPoly num_;
  NPoly den_;
};

}  // namespace agr
