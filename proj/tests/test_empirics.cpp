#include "agr/empirics.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace agr;

TEST(IntersectionExponent, Examples) {
  const FieldParams f = make_field(11, 2);
  const double l = std::log2(11.0);
  EXPECT_NEAR(intersection_exponent(Family::DLP, f), 11 - l, 1e-9);
  EXPECT_NEAR(intersection_exponent(Family::DLP, f), 7.541, 1e-3);
  EXPECT_NEAR(intersection_exponent(Family::TLP, f), 10 * l, 1e-9);
  EXPECT_NEAR(intersection_exponent(Family::TLP, f), 34.59, 1e-2);
  EXPECT_NEAR(intersection_exponent(Family::ID, f), 0, 1e-12);
  EXPECT_NEAR(intersection_exponent(Family::RFP, f, 5), 4 * l, 1e-9);
}

TEST(IntersectionExponent, ChainAtLargerPrimes) {
  // At p = 11 the root-finding exponent 4 lg 11 exceeds the discrete-log one
  // 11 - lg 11; from p = 101 on the ordering follows the continuous chain.
  for (u64 p : {101, 1009}) {
    FieldParams f = make_field(p);
    f.g = 2;  // 2 does not generate Z*_1009; the exponent only needs the base
    const double id = intersection_exponent(Family::ID, f);
    const double rfp = intersection_exponent(Family::RFP, f);
    const double dlp = intersection_exponent(Family::DLP, f);
    const double tlp = intersection_exponent(Family::TLP, f);
    EXPECT_LT(id, rfp) << p;
    EXPECT_LT(rfp, dlp) << p;
    EXPECT_LT(dlp, tlp) << p;
  }
  const FieldParams f = make_field(11, 2);
  EXPECT_GT(intersection_exponent(Family::RFP, f), intersection_exponent(Family::DLP, f));
}

TEST(Census, Conservation) {
  for (u64 p : {7, 11, 13}) {
    const FieldParams f = make_field(p);
    for (Family fam : all_families()) {
      const Census c = preimage_census({fam, f, 5, 1, {}});
      u64 total = 0;
      for (u64 v : c.counts) total += v;
      EXPECT_EQ(total, p - 1) << to_string(fam) << " p=" << p;
      u64 ys = 0;
      for (const auto& [count, how_many] : c.histogram) ys += how_many;
      EXPECT_EQ(ys, p);
    }
  }
}

TEST(Census, Examples) {
  const Census dlp = preimage_census({Family::DLP, make_field(13), 5, 1, {}});
  EXPECT_EQ(dlp.max_preimage, 1u);
  EXPECT_DOUBLE_EQ(dlp.avg_preimage, 1.0);
  EXPECT_DOUBLE_EQ(dlp.solvable_fraction, 1.0);

  const Census tlp = preimage_census({Family::TLP, make_field(7), 5, 1, {}});
  EXPECT_EQ(tlp.counts[4], 2u);
  EXPECT_EQ(tlp.counts[5], 0u);
  EXPECT_THROW(preimage_census({Family::DLP, make_field(16411), 5, 1, {}}), WorkBoundExceeded);
}

TEST(Sweep, RowsAndDeterminism) {
  SweepConfig cfg;
  cfg.families = {Family::DLP, Family::TLP};
  cfg.primes = {101, 1009, 10007};
  cfg.seed = 42;
  const ExperimentReport a = hardness_sweep(cfg);
  ASSERT_EQ(a.rows.size(), 6u);
  for (const auto& r : a.rows) {
    EXPECT_TRUE(r.within_bound);
    if (r.family == Family::DLP) {
      EXPECT_DOUBLE_EQ(r.avg_preimage, 1.0);
      ASSERT_TRUE(r.bsgs_ops.has_value());
      EXPECT_LE(*r.bsgs_ops, 2 * static_cast<u64>(std::ceil(std::sqrt(r.prime - 1.0))) + 8);
    } else {
      EXPECT_FALSE(r.bsgs_ops.has_value());
    }
  }
  EXPECT_EQ(a.rows.front().family, Family::DLP);
  EXPECT_EQ(a.rows.front().prime, 101u);

  cfg.parallel = false;
  EXPECT_EQ(to_csv(a), to_csv(hardness_sweep(cfg)));
  cfg.seed = 43;
  EXPECT_NE(to_csv(a), to_csv(hardness_sweep(cfg)));
}

TEST(Sweep, CsvShape) {
  SweepConfig cfg;
  cfg.families = {Family::ID};
  cfg.primes = {7};
  const std::string csv = to_csv(hardness_sweep(cfg));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "prime,family,g,n,avg_preimage,max_preimage,solvable_fraction,exhaustive_ops,bsgs_ops,intersection_exponent");
  EXPECT_NE(csv.find("7,ID,3,5,1,1,1,"), std::string::npos) << csv;
  EXPECT_NE(csv.find(",NA,0\n"), std::string::npos) << csv;
}

TEST(Sweep, RejectsBadConfig) {
  SweepConfig cfg;
  cfg.families = {Family::ID};
  cfg.primes = {8};
  EXPECT_THROW(hardness_sweep(cfg), NotPrime);
  cfg.primes = {7};
  cfg.trials = 0;
  EXPECT_THROW(hardness_sweep(cfg), DomainError);
}
