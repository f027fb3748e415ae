#pragma once

// Prime fields at desk scale (p <= 2^32) and the modular problem families.

#include "agr/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace agr {

using u64 = std::uint64_t;

inline constexpr u64 kMaxFieldPrime = u64{1} << 32;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

inline u64 gcd(u64 a, u64 b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
inline std::optional<u64> invmod(u64 a, u64 m) {
  __int128 t = 0, nt = 1, r = m, nr = a % m;
  while (nr) {
    const __int128 q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (r != 1) return std::nullopt;
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) out.push_back(n);
  return out;
}

inline u64 totient(u64 n) {
  u64 r = n;
  for (u64 q : prime_factors(n)) r = r / q * (q - 1);
  return r;
}

/// Multiplicative order of a modulo m (gcd(a, m) = 1 assumed).
inline u64 order_mod(u64 a, u64 m) {
  u64 ord = totient(m);
  for (u64 q : prime_factors(ord))
    while (ord % q == 0 && powmod(a, ord / q, m) == 1) ord /= q;
  return ord;
}

struct FieldParams {
  u64 p = 0;
  u64 g = 0;
  std::vector<u64> phi_tower;  // p, phi(p), phi(phi(p))
  /// Element of Z*_{p-1} with maximal order, used by nested exponents.
  u64 g1 = 1;
};

inline bool is_generator(u64 g, u64 p) {
  if (g == 0 || g >= p) return false;
  for (u64 q : prime_factors(p - 1))
    if (powmod(g, (p - 1) / q, p) == 1) return false;
  return true;
}

inline u64 default_g1(u64 p) {
  const u64 m = p - 1;
  u64 best = 1;
  u64 best_ord = 1;
  for (u64 a = 2; a < m && best_ord < totient(m); ++a) {
    if (gcd(a, m) != 1) continue;
    const u64 o = order_mod(a, m);
    if (o > best_ord) {
      best = a;
      best_ord = o;
    }
  }
  return best;
}

/// Validates p and g; picks the smallest generator when g is absent.
inline FieldParams make_field(u64 p, std::optional<u64> g = std::nullopt, std::optional<u64> g1 = std::nullopt) {
  if (p < 3 || p > kMaxFieldPrime) throw NotPrime("p = " + std::to_string(p) + " is outside [3, 2^32]");
  if (!is_prime(p)) throw NotPrime("p = " + std::to_string(p) + " is not prime");
  FieldParams f;
  f.p = p;
  if (g) {
    if (!is_generator(*g, p))
      throw NotGenerator("g = " + std::to_string(*g) + " does not generate Z*_" + std::to_string(p));
    f.g = *g;
  } else {
    for (u64 c = 2; c < p; ++c)
      if (is_generator(c, p)) {
        f.g = c;
        break;
      }
  }
  f.phi_tower = {p, p - 1, totient(p - 1)};
  if (g1) {
    if (*g1 == 0 || gcd(*g1, p - 1) != 1)
      throw InvalidInstance("g1 = " + std::to_string(*g1) + " is not a unit mod " + std::to_string(p - 1));
    f.g1 = *g1 % (p - 1);
  } else {
    f.g1 = default_g1(p);
  }
  return f;
}

enum class Family { ID, DLP, TLP, RFP, GXN, POLY, GGX, XNGX, XGX, GXXX, GXSHIFT, NRECIP, SPP };

inline const std::vector<Family>& all_families() {
  static const std::vector<Family> v = {Family::ID,   Family::DLP,  Family::TLP,  Family::RFP,     Family::GXN,
                                        Family::POLY, Family::GGX,  Family::XNGX, Family::XGX,     Family::GXXX,
                                        Family::GXSHIFT, Family::NRECIP};
  return v;
}

inline std::string to_string(Family f) {
  switch (f) {
    case Family::ID: return "ID";
    case Family::DLP: return "DLP";
    case Family::TLP: return "TLP";
    case Family::RFP: return "RFP";
    case Family::GXN: return "GXN";
    case Family::POLY: return "POLY";
    case Family::GGX: return "GGX";
    case Family::XNGX: return "XNGX";
    case Family::XGX: return "XGX";
    case Family::GXXX: return "GXXX";
    case Family::GXSHIFT: return "GXSHIFT";
    case Family::NRECIP: return "NRECIP";
    case Family::SPP: return "SPP";
  }
  return "?";
}

inline Family parse_family(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  if (s == "IDENTITY") s = "ID";
  for (Family f : all_families())
    if (to_string(f) == s) return f;
  if (s == "SPP") return Family::SPP;
  throw DomainError("unknown family '" + s + "'");
}

/// The expression each family inverts, in the parser's grammar.
inline std::string family_expression(Family f) {
  switch (f) {
    case Family::ID: return "x";
    case Family::DLP: return "g^x";
    case Family::TLP: return "x^x";
    case Family::RFP: return "x^n";
    case Family::GXN: return "g^(x^n)";
    case Family::POLY: return "x^n+x+1";
    case Family::GGX: return "g^(g1^x)";
    case Family::XNGX: return "x^n*g^x";
    case Family::XGX: return "x*g^x";
    case Family::GXXX: return "g^x*x^x";
    case Family::GXSHIFT: return "(g*x)^x";
    case Family::NRECIP: return "-1/x";
    case Family::SPP: return "";
  }
  return "";
}

inline bool uses_n(Family f) { return f == Family::RFP || f == Family::GXN || f == Family::POLY || f == Family::XNGX; }

struct ProblemInstance {
  Family family = Family::DLP;
  FieldParams field;
  u64 n = 5;
  u64 y = 1;
  std::vector<u64> C;  // SPP constants C_1..C_n
};

/// f(x) mod m for the family, with the base field's g, g1 and n. Exponents
/// that live one level up are reduced mod phi(m) only for nested families;
/// x^x keeps the integer exponent x as is.
inline u64 eval_mod(const ProblemInstance& inst, u64 x, u64 m) {
  const u64 g = inst.field.g;
  const u64 n = inst.n;
  switch (inst.family) {
    case Family::ID: return x % m;
    case Family::DLP: return powmod(g, x, m);
    case Family::TLP: return powmod(x, x, m);
    case Family::RFP: return powmod(x, n, m);
    case Family::GXN: {
      const u64 e = totient(m);
      return powmod(g, powmod(x, n, e), m);
    }
    case Family::POLY: return (powmod(x, n, m) + x % m + 1) % m;
    case Family::GGX: {
      const u64 e = totient(m);
      return powmod(g, powmod(inst.field.g1, x, e), m);
    }
    case Family::XNGX: return mulmod(powmod(x, n, m), powmod(g, x, m), m);
    case Family::XGX: return mulmod(x % m, powmod(g, x, m), m);
    case Family::GXXX: return mulmod(powmod(g, x, m), powmod(x, x, m), m);
    case Family::GXSHIFT: return powmod(mulmod(g % m, x % m, m), x, m);
    case Family::NRECIP: {
      auto inv = invmod(x % m, m);
      if (!inv) throw DomainError("x = " + std::to_string(x) + " has no inverse mod " + std::to_string(m));
      return (m - *inv) % m;
    }
    case Family::SPP: break;
  }
  throw InvalidInstance("family " + to_string(inst.family) + " has no scalar evaluation");
}

/// f(x) mod p. x must lie in [1, p-1] unless `extended_domain` is set, which
/// admits the larger solution domains used by reductions (e.g. {g, ..., (p-1)g}).
inline u64 eval_family(const ProblemInstance& inst, u64 x, bool extended_domain = false) {
  const u64 p = inst.field.p;
  if (x == 0 || (!extended_domain && x >= p))
    throw DomainError("x = " + std::to_string(x) + " is outside [1, " + std::to_string(p - 1) + "]");
  return eval_mod(inst, x, p);
}

inline void validate(const ProblemInstance& inst) {
  const u64 p = inst.field.p;
  if (inst.family == Family::SPP) {
    if (inst.C.empty()) throw InvalidInstance("SPP needs constants C_1..C_n");
    // lg p < n, strictly.
    if (static_cast<double>(inst.C.size()) <= std::log2(static_cast<double>(p)))
      throw InvalidInstance("SPP requires lg p < n");
    for (u64 c : inst.C)
      if (c == 0 || c >= p) throw InvalidInstance("SPP constants must lie in [1, p-1]");
  }
  if (uses_n(inst.family) && inst.n < 5) throw InvalidInstance("n must be >= 5");
  if (inst.y == 0 || inst.y >= p) throw InvalidInstance("y = " + std::to_string(inst.y) + " is outside [1, p-1]");
}

}  // namespace agr
