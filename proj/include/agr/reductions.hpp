#pragma once

// Polynomial time reductions between the problem families, each recording
// the oracle calls and intermediate values it used.

#include "agr/solvers.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace agr {

struct TraceStep {
  std::string description;
  std::vector<std::pair<std::string, std::string>> values;
};

struct ReductionTrace {
  std::vector<TraceStep> steps;

  void add(std::string description, std::vector<std::pair<std::string, std::string>> values = {}) {
    steps.push_back({std::move(description), std::move(values)});
  }
};

struct ReductionResult {
  std::set<u64> solutions;
  ReductionTrace trace;
};

inline std::string str(u64 v) { return std::to_string(v); }

inline std::string str(const std::set<u64>& s) {
  std::string out = "{";
  for (u64 v : s) out += (out.size() > 1 ? "," : "") + std::to_string(v);
  return out + "}";
}

/// TLP oracle: all w in `domain` with w^w = z (mod p).
using TlpOracle = std::function<std::set<u64>(u64 z, const FieldParams&, const std::vector<u64>& domain)>;
/// DLP oracle: x in [1, p-1] with g^x = y (mod p).
using DlpOracle = std::function<u64(u64 y, const FieldParams&)>;
/// SPP oracle over weighted constants.
using SppOracle = std::function<std::set<u64>(const FieldParams&, const std::vector<u64>& C, u64 target,
                                              const std::vector<u64>& weights)>;

inline TlpOracle exhaustive_tlp_oracle() {
  return [](u64 z, const FieldParams& f, const std::vector<u64>& domain) {
    return solve_exhaustive({Family::TLP, f, 5, z, {}}, domain).solutions;
  };
}

inline DlpOracle bsgs_dlp_oracle() {
  return [](u64 y, const FieldParams& f) { return solve_dlp_bsgs(f, y).x; };
}

inline SppOracle exhaustive_spp_oracle() {
  return [](const FieldParams& f, const std::vector<u64>& C, u64 target, const std::vector<u64>& w) {
    return spp_solve_exhaustive(f, C, target, w).strings;
  };
}

/// y = (g x)^x (mod p) through a TLP oracle: z = y^g = w^w with w = g x.
/// `g` need not generate the field (g = 1 degenerates to plain TLP) but must
/// be coprime to p - 1.
inline ReductionResult reduce_gx_shift(u64 y, const FieldParams& field, u64 g, const TlpOracle& oracle) {
  const u64 p = field.p;
  if (g == 0 || gcd(g, p - 1) != 1)
    throw InvalidInstance("g = " + str(g) + " is not coprime to p - 1 = " + str(p - 1));
  ReductionResult r;
  const u64 z = powmod(y, g, p);
  r.trace.add("raise both sides to g", {{"z", str(z)}, {"y", str(y)}, {"g", str(g)}});
  std::vector<u64> q2;
  for (u64 a = 1; a < p; ++a) q2.push_back(a * g);
  r.trace.add("solution domain Q2 = g * Q1", {{"size", str(q2.size())}, {"min", str(q2.front())}, {"max", str(q2.back())}});
  const std::set<u64> ws = oracle(z, field, q2);
  r.trace.add("TLP oracle on z over Q2", {{"w", str(ws)}});
  FieldParams shifted = field;
  shifted.g = g;
  const ProblemInstance check{Family::GXSHIFT, shifted, 5, y, {}};
  const auto inv_p = invmod(g % p, p);
  const auto inv_q = invmod(g % (p - 1), p - 1);
  for (u64 w : ws) {
    // Recovery can be read mod p or mod p - 1; keep every candidate that verifies.
    std::set<u64> cands;
    if (w % g == 0) cands.insert(w / g);
    if (inv_p) cands.insert(mulmod(w % p, *inv_p, p));
    if (inv_q) cands.insert(mulmod(w % (p - 1), *inv_q, p - 1));
    std::set<u64> ok;
    for (u64 x : cands)
      if (x >= 1 && x < p && eval_family(check, x) == y) ok.insert(x);
    r.trace.add("recover x = w * g^-1", {{"w", str(w)}, {"candidates", str(cands)}, {"verified", str(ok)}});
    r.solutions.insert(ok.begin(), ok.end());
  }
  // The oracle domain misses w = g x only when no w maps back, which cannot
  // happen since Gamma(a) = g a is a bijection Q1 -> Q2.
  return r;
}

/// y = g^x x^x (mod p): enumerate splittings y = y1 y2, solve y1 = g^x with
/// BSGS and accept when y2 = x^x.
inline ReductionResult solve_gxxx(const FieldParams& field, u64 y) {
  const u64 p = field.p;
  if (y == 0 || y >= p) throw InvalidInstance("y = " + str(y) + " is outside [1, p-1]");
  ReductionResult r;
  for (u64 y1 = 1; y1 < p; ++y1) {
    const u64 x = solve_dlp_bsgs(field, y1).x;
    const u64 y2 = mulmod(y, *invmod(y1, p), p);
    const bool hit = powmod(x, x, p) == y2;
    r.trace.add(hit ? "accept" : "reject", {{"y1", str(y1)}, {"y2", str(y2)}, {"x", str(x)}});
    if (hit) r.solutions.insert(x);
  }
  if (r.solutions.empty()) r.trace.add("no splitting satisfies y2 = x^x");
  return r;
}

/// y = g^(x^n) (mod p): w = log_g y, then every x in [1, p-1] with x^n = w (mod p - 1).
inline ReductionResult reduce_gxn_to_dlp(u64 y, const FieldParams& field, u64 n, const DlpOracle& oracle) {
  const u64 p = field.p;
  ReductionResult r;
  const u64 w = oracle(y, field) % (p - 1);
  r.trace.add("DLP oracle", {{"y", str(y)}, {"w", str(w)}});
  std::set<u64> roots;
  for (u64 x = 1; x < p; ++x)
    if (powmod(x, n, p - 1) == w % (p - 1)) roots.insert(x);
  r.trace.add("roots of x^n = w (mod p-1)", {{"roots", str(roots)}});
  const ProblemInstance check{Family::GXN, field, n, y, {}};
  for (u64 x : roots)
    if (eval_family(check, x) == y) r.solutions.insert(x);
  return r;
}

/// Period of x -> f(x) mod q for a prime q.
inline u64 family_period(Family f, u64 q) {
  switch (f) {
    case Family::ID:
    case Family::RFP:
    case Family::POLY:
    case Family::NRECIP: return q;
    case Family::DLP:
    case Family::GXN: return q - 1;
    default: return q * (q - 1);
  }
}

/// Solutions mod m = p q of y = f(x), from per-prime solutions combined by CRT
/// over each prime's period. `domain` defaults to [1, m - 1].
inline ReductionResult reduce_composite_crt(u64 y, const ProblemInstance& proto, u64 p, u64 q,
                                            std::optional<std::pair<u64, u64>> domain = std::nullopt) {
  if (p == q) throw InvalidInstance("p and q must be distinct");
  if (!is_prime(p) || !is_prime(q) || p < 3 || q < 3) throw NotPrime("p and q must be odd primes");
  // g1^x mod (q - 1) is only eventually periodic when g1 is not a unit there.
  if (proto.family == Family::SPP || proto.family == Family::GGX)
    throw InvalidInstance(to_string(proto.family) + " has no CRT form");
  const u64 m = p * q;
  const auto [lo, hi] = domain.value_or(std::pair<u64, u64>{1, m - 1});
  ReductionResult r;
  // Per-prime residues of x modulo that prime's period.
  auto per_prime = [&](u64 pr) {
    ProblemInstance inst = proto;
    inst.field.p = pr;
    const u64 period = family_period(proto.family, pr);
    std::set<u64> res;
    for (u64 x = 0; x < period; ++x) {
      const u64 xx = x == 0 ? period : x;
      if (proto.family == Family::NRECIP && xx % pr == 0) continue;
      if (eval_mod(inst, xx, pr) == y % pr) res.insert(x);
    }
    r.trace.add("solve mod " + str(pr), {{"y", str(y % pr)}, {"period", str(period)}, {"residues", str(res)}});
    return std::pair{res, period};
  };
  const auto [rp, pp] = per_prime(p);
  const auto [rq, pq] = per_prime(q);
  for (u64 a : rp)
    for (u64 b : rq) {
      auto merged = crt_merge(a, pp, b, pq);
      if (!merged) continue;
      const auto [x0, l] = *merged;
      for (u64 x = x0; x <= hi; x += l) {
        if (x < lo) continue;
        if (gcd(x, m) != 1 && proto.family == Family::NRECIP) continue;
        if (eval_mod(proto, x, m) == y % m) r.solutions.insert(x);
      }
    }
  r.trace.add("combine and verify mod " + str(m), {{"solutions", str(r.solutions)}});
  return r;
}

/// Exhaustive reference for reduce_composite_crt.
inline std::set<u64> solve_composite_exhaustive(u64 y, const ProblemInstance& proto, u64 m, u64 lo, u64 hi) {
  std::set<u64> out;
  for (u64 x = lo; x <= hi; ++x) {
    if (proto.family == Family::NRECIP && gcd(x, m) != 1) continue;
    if (eval_mod(proto, x, m) == y % m) out.insert(x);
  }
  return out;
}

/// DLP through SPP: C_1 = ... = C_n = g with weights 2^(i-1), so a string b
/// encodes x = sum b_i 2^(i-1).
inline ReductionResult reduce_dlp_to_spp(u64 y, const FieldParams& field, int n, const SppOracle& oracle) {
  const u64 p = field.p;
  int bits = 0;
  for (u64 v = p - 1; v; v >>= 1) ++bits;
  if (n < bits) throw InvalidInstance("n = " + std::to_string(n) + " is below the bit length of p - 1");
  ReductionResult r;
  const std::vector<u64> C(n, field.g);
  std::vector<u64> w(n);
  for (int i = 0; i < n; ++i) w[i] = u64{1} << i;
  const std::set<u64> strings = oracle(field, C, y, w);
  r.trace.add("SPP oracle with C_i = g, weights 2^(i-1)", {{"target", str(y)}, {"n", std::to_string(n)}});
  if (strings.empty()) throw ReductionFailed("SPP oracle returned no string for y = " + str(y));
  for (u64 code : strings) {
    u64 x = code % (p - 1);
    if (x == 0) x = p - 1;
    r.trace.add("reassemble x", {{"b", bitstring(code, n)}, {"x", str(x)}});
    if (powmod(field.g, x, p) == y) r.solutions.insert(x);
  }
  if (r.solutions.empty()) throw ReductionFailed("no reassembled x verifies for y = " + str(y));
  return r;
}

}  // namespace agr
