#pragma once

// Reference solvers: exhaustive search, baby-step giant-step, CRT and the
// subset product problem.

#include "agr/field.hpp"
#include "agr/npoly.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

namespace agr {

inline constexpr u64 kDefaultWorkBound = u64{1} << 26;
inline constexpr int kMaxSppLength = 24;

/// AGR_WORK_BOUND from the environment, else the default.
inline u64 work_bound_from_env() {
  if (const char* v = std::getenv("AGR_WORK_BOUND")) {
    char* end = nullptr;
    const unsigned long long b = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0' && b > 0) return b;
    throw DomainError(std::string("AGR_WORK_BOUND is not a positive integer: ") + v);
  }
  return kDefaultWorkBound;
}

struct SolveResult {
  std::set<u64> solutions;
  u64 ops = 0;
};

/// Every x in `domain` (default [1, p-1]) with f(x) = y.
inline SolveResult solve_exhaustive(const ProblemInstance& inst, const std::optional<std::vector<u64>>& domain = {},
                                    u64 work_bound = kDefaultWorkBound) {
  const u64 p = inst.field.p;
  const u64 size = domain ? domain->size() : p - 1;
  if (size > work_bound)
    throw WorkBoundExceeded("domain of " + std::to_string(size) + " exceeds the work bound " + std::to_string(work_bound));
  SolveResult r;
  auto probe = [&](u64 x) {
    ++r.ops;
    if (eval_family(inst, x, domain.has_value()) == inst.y) r.solutions.insert(x);
  };
  if (domain)
    for (u64 x : *domain) probe(x);
  else
    for (u64 x = 1; x < p; ++x) probe(x);
  return r;
}

struct BsgsResult {
  u64 x = 0;
  u64 ops = 0;
};

/// Unique x in [1, p-1] with g^x = y (mod p); y = 1 maps to p - 1.
inline BsgsResult solve_dlp_bsgs(const FieldParams& f, u64 y) {
  const u64 p = f.p;
  if (y == 0 || y >= p) throw InvalidInstance("y = " + std::to_string(y) + " is outside [1, p-1]");
  const u64 order = p - 1;
  const u64 m = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(order))));
  BsgsResult r;
  std::unordered_map<u64, u64> baby;
  baby.reserve(m * 2);
  u64 cur = 1;
  for (u64 j = 0; j < m; ++j) {
    baby.emplace(cur, j);
    cur = mulmod(cur, f.g, p);
    ++r.ops;
  }
  const u64 step = powmod(*invmod(f.g, p), m, p);
  u64 gamma = y;
  for (u64 i = 0; i <= m; ++i) {
    ++r.ops;
    auto it = baby.find(gamma);
    if (it != baby.end()) {
      u64 x = (i * m + it->second) % order;
      r.x = x == 0 ? order : x;
      return r;
    }
    gamma = mulmod(gamma, step, p);
  }
  throw NotGenerator("g = " + std::to_string(f.g) + " does not reach y = " + std::to_string(y));
}

/// x mod prod(m_i) with x = r_i (mod m_i); moduli must be pairwise coprime.
inline BigInt crt_combine(const std::vector<std::pair<BigInt, BigInt>>& residues) {
  BigInt x = 0;
  BigInt mod = 1;
  for (const auto& [r, m] : residues) {
    if (m <= 0) throw DomainError("CRT modulus must be positive");
    if (boost::multiprecision::gcd(mod, m) != 1) throw DomainError("CRT moduli are not pairwise coprime");
    // x + mod * t = r (mod m)
    BigInt inv = 0;
    {
      BigInt a = mod % m, b = m, s0 = 1, s1 = 0;
      while (b != 0) {
        BigInt q = a / b;
        a -= q * b;
        std::swap(a, b);
        s0 -= q * s1;
        std::swap(s0, s1);
      }
      inv = m == 1 ? BigInt(0) : ((s0 % m) + m) % m;
    }
    BigInt diff = ((r - x) % m + m) % m;
    BigInt t = diff * inv % m;
    x += mod * t;
    mod *= m;
  }
  return x % mod;
}

/// Merge x = a1 (mod m1) with x = a2 (mod m2) when the moduli share factors;
/// nullopt when the congruences are incompatible.
inline std::optional<std::pair<u64, u64>> crt_merge(u64 a1, u64 m1, u64 a2, u64 m2) {
  const u64 d = gcd(m1, m2);
  if ((a1 % d) != (a2 % d)) return std::nullopt;
  const u64 l = m1 / d * m2;
  for (u64 x = a1 % m1; x < l; x += m1)
    if (x % m2 == a2 % m2) return std::pair{x, l};
  return std::nullopt;
}

struct SppResult {
  /// Bit i (LSB-first) set when b_{i+1} = 1.
  std::set<u64> strings;
  u64 ops = 0;
};

/// All nonzero b with prod C_i^(b_i * w_i) = target (mod p). Weights w_i
/// default to 1; the weighted form with w_i = 2^(i-1) is what reduces DLP.
inline SppResult spp_solve_exhaustive(const FieldParams& f, const std::vector<u64>& C, u64 target,
                                      const std::vector<u64>& weights = {}) {
  const int n = static_cast<int>(C.size());
  if (n == 0) throw InvalidInstance("SPP needs at least one constant");
  if (n > kMaxSppLength) throw WorkBoundExceeded("SPP length " + std::to_string(n) + " exceeds 24");
  if (static_cast<double>(n) <= std::log2(static_cast<double>(f.p))) throw InvalidInstance("SPP requires lg p < n");
  std::vector<u64> factor(n);
  for (int i = 0; i < n; ++i) factor[i] = weights.empty() ? C[i] % f.p : powmod(C[i], weights[i], f.p);
  SppResult r;
  // Gray-code walk: one multiplication or division per step.
  std::vector<u64> inv(n);
  for (int i = 0; i < n; ++i) {
    auto v = invmod(factor[i], f.p);
    if (!v) throw InvalidInstance("SPP constant is not a unit mod p");
    inv[i] = *v;
  }
  u64 prod = 1;
  u64 code = 0;
  for (u64 step = 1; step < (u64{1} << n); ++step) {
    const int bit = __builtin_ctzll(step);
    code ^= u64{1} << bit;
    prod = mulmod(prod, (code >> bit) & 1 ? factor[bit] : inv[bit], f.p);
    ++r.ops;
    if (prod == target % f.p) r.strings.insert(code);
  }
  return r;
}

inline std::string bitstring(u64 code, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += (code >> i) & 1 ? '1' : '0';
  return s;
}

struct Density {
  Rational value;
  bool exceeds_one = false;
};

/// Knapsack density n / lg p, with lg p rounded to 1e-12.
inline Density spp_density(u64 n, u64 p) {
  if (p < 3 || n < 1) throw DomainError("density needs p >= 3 and n >= 1");
  const double lg = std::log2(static_cast<double>(p));
  const BigInt scale = BigInt(1000000000000LL);
  const Rational lg_r(BigInt(static_cast<long long>(std::llround(lg * 1e12))), scale);
  Density d;
  d.value = Rational(BigInt(n)) / lg_r;
  d.exceeds_one = d.value > 1;
  return d;
}

}  // namespace agr
