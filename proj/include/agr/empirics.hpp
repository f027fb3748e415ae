#pragma once

// Prime sweeps: intersection exponents, preimage censuses and solver op counts.

#include "agr/calculus.hpp"
#include "agr/solvers.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace agr {

inline constexpr u64 kMaxCensusPrime = u64{1} << 14;

/// log2 f(p) - log2 p for the family's real lift: the exponent of the number
/// of level lines y0 + m p that the increasing curve crosses on (0, p).
inline double intersection_exponent(Family family, const FieldParams& field, u64 n = 5) {
  if (family == Family::NRECIP || family == Family::SPP)
    throw DomainError("family " + to_string(family) + " has no increasing real lift");
  Bindings b;
  b.x = static_cast<double>(field.p);
  b.g = static_cast<double>(field.g);
  b.g1 = static_cast<double>(field.g1);
  b.n = static_cast<long long>(n);
  const double lf = evaluate(parse(family_expression(family)), b, true);
  if (!std::isfinite(lf)) throw EvaluationError("log2 f(p) overflows for family " + to_string(family));
  return lf - std::log2(static_cast<double>(field.p));
}

struct Census {
  /// histogram[c] = number of y in [0, p-1] with exactly c preimages.
  std::map<u64, u64> histogram;
  /// Preimage count per y in [0, p-1].
  std::vector<u64> counts;
  double avg_preimage = 0;  // over solvable y in [1, p-1]
  u64 max_preimage = 0;
  double solvable_fraction = 0;  // of y in [1, p-1]
  u64 ops = 0;
};

inline Census preimage_census(const ProblemInstance& proto, u64 work_bound = kDefaultWorkBound) {
  const u64 p = proto.field.p;
  if (p > kMaxCensusPrime) throw WorkBoundExceeded("exact census needs p <= 2^14");
  if (p - 1 > work_bound) throw WorkBoundExceeded("census domain exceeds the work bound");
  Census c;
  c.counts.assign(p, 0);
  for (u64 x = 1; x < p; ++x) {
    ++c.counts[eval_family(proto, x)];
    ++c.ops;
  }
  u64 solvable = 0;
  u64 total = 0;
  for (u64 y = 0; y < p; ++y) {
    ++c.histogram[c.counts[y]];
    if (y == 0) continue;
    if (c.counts[y] > 0) {
      ++solvable;
      total += c.counts[y];
    }
    c.max_preimage = std::max(c.max_preimage, c.counts[y]);
  }
  c.avg_preimage = solvable ? static_cast<double>(total) / static_cast<double>(solvable) : 0.0;
  c.solvable_fraction = static_cast<double>(solvable) / static_cast<double>(p - 1);
  return c;
}

struct SweepConfig {
  std::vector<Family> families;
  std::vector<u64> primes;
  u64 g = 2;
  u64 n = 5;
  u64 trials = 8;
  u64 seed = 0;
  u64 work_bound = kDefaultWorkBound;
  bool parallel = true;
};

struct SweepRow {
  u64 prime = 0;
  Family family = Family::ID;
  u64 g = 0;
  u64 n = 0;
  bool within_bound = true;
  double avg_preimage = 0;
  u64 max_preimage = 0;
  double solvable_fraction = 0;
  u64 exhaustive_ops = 0;
  std::optional<u64> bsgs_ops;  // DLP only
  std::optional<double> intersection_exponent;
};

struct ExperimentReport {
  std::vector<SweepRow> rows;
};

namespace detail {

inline SweepRow sweep_row(Family family, u64 p, const SweepConfig& cfg) {
  FieldParams f = is_generator(cfg.g, p) ? make_field(p, cfg.g) : make_field(p);
  SweepRow row;
  row.prime = p;
  row.family = family;
  row.g = f.g;
  row.n = cfg.n;
  const ProblemInstance inst{family, f, cfg.n, 1, {}};
  try {
    const Census c = preimage_census(inst, cfg.work_bound);
    row.avg_preimage = c.avg_preimage;
    row.max_preimage = c.max_preimage;
    row.solvable_fraction = c.solvable_fraction;
    // Exhaustive work per trial is the domain scanned; targets are drawn from
    // a per-row stream so the row does not depend on scheduling.
    std::mt19937_64 rng(cfg.seed ^ (p * 1000003ULL) ^ (static_cast<u64>(family) * 0x9E3779B97F4A7C15ULL));
    std::uniform_int_distribution<u64> pick(1, p - 1);
    u64 bsgs = 0;
    for (u64 t = 0; t < cfg.trials; ++t) {
      const u64 y = pick(rng);
      ProblemInstance q = inst;
      q.y = y;
      row.exhaustive_ops += solve_exhaustive(q, {}, cfg.work_bound).ops;
      if (family == Family::DLP) bsgs = std::max(bsgs, solve_dlp_bsgs(f, y).ops);
    }
    if (family == Family::DLP) row.bsgs_ops = bsgs;
  } catch (const WorkBoundExceeded&) {
    row.within_bound = false;
  }
  if (family != Family::NRECIP) {
    try {
      row.intersection_exponent = intersection_exponent(family, f, cfg.n);
    } catch (const EvaluationError&) {
    }
  }
  return row;
}

}  // namespace detail

/// Runs every (family, prime) row; rows are sorted by (family, prime) so the
/// report does not depend on execution order.
inline ExperimentReport hardness_sweep(const SweepConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("trials must be >= 1");
  for (u64 p : cfg.primes)
    if (!is_prime(p) || p < 3) throw NotPrime("p = " + std::to_string(p) + " is not an odd prime");
  ExperimentReport rep;
  if (cfg.parallel) {
    std::vector<std::future<SweepRow>> jobs;
    for (Family fam : cfg.families)
      for (u64 p : cfg.primes) jobs.push_back(std::async(std::launch::async, detail::sweep_row, fam, p, std::cref(cfg)));
    for (auto& j : jobs) rep.rows.push_back(j.get());
  } else {
    for (Family fam : cfg.families)
      for (u64 p : cfg.primes) rep.rows.push_back(detail::sweep_row(fam, p, cfg));
  }
  std::sort(rep.rows.begin(), rep.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.family != b.family) return to_string(a.family) < to_string(b.family);
    return a.prime < b.prime;
  });
  return rep;
}

inline std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string to_csv(const ExperimentReport& rep) {
  std::ostringstream os;
  os << "prime,family,g,n,avg_preimage,max_preimage,solvable_fraction,exhaustive_ops,bsgs_ops,intersection_exponent\n";
  for (const auto& r : rep.rows) {
    os << r.prime << ',' << to_string(r.family) << ',' << r.g << ',' << r.n << ',';
    if (r.within_bound)
      os << format_g6(r.avg_preimage) << ',' << r.max_preimage << ',' << format_g6(r.solvable_fraction) << ','
         << r.exhaustive_ops << ',';
    else
      os << "NA,NA,NA,NA,";
    os << (r.bsgs_ops ? std::to_string(*r.bsgs_ops) : "NA") << ','
       << (r.intersection_exponent ? format_g6(*r.intersection_exponent) : "NA") << '\n';
  }
  return os.str();
}

}  // namespace agr
