#include "equidist/certifier.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace equidist;

namespace {

constexpr Index kE31 = Index(1000000000000000LL) * Index(10000000000000000LL);

const SequenceSpec& pow15() {
  static const SequenceSpec spec = SequenceSpec::power(1.5);
  return spec;
}

}  // namespace

TEST(SignChange, Examples) {
  const std::vector<double> rising{-2, -1, 0, 1};
  const auto s = sign_change_index(rising);
  ASSERT_TRUE(s.h);
  EXPECT_EQ(*s.h, 3);
  EXPECT_TRUE(s.beta_positive);
  EXPECT_EQ(*sign_change_index(std::vector<double>{1, 2}).h, 0);
  EXPECT_TRUE(sign_change_index(std::vector<double>{-3, -1}).infinite());
  EXPECT_THROW(sign_change_index(std::vector<double>{2, 1}), HypothesisError);
}

TEST(ResidueSequence, LinearIsFlat) {
  // x_n = n/4, p/q = 1/4: y_k = x_{n+r+4(k-1)} - k is constant.
  const auto y = residue_sequence(SequenceSpec::quadratic("0.25", "0"), 0, 1, 4, 3, 6);
  ASSERT_EQ(y.values.size(), 6u);
  ASSERT_EQ(y.differences.size(), 5u);
  for (double v : y.values) EXPECT_DOUBLE_EQ(v, 0.75 - 1);
  for (double d : y.differences) EXPECT_EQ(d, 0.0);
  EXPECT_TRUE(sign_change_index(y).infinite());
}

TEST(ResidueSequence, Validation) {
  const auto spec = SequenceSpec::quadratic("0.25", "0");
  EXPECT_THROW(residue_sequence(spec, 0, 1, 4, 0, 6), std::invalid_argument);
  EXPECT_THROW(residue_sequence(spec, 0, 1, 4, 5, 6), std::invalid_argument);
  EXPECT_THROW(residue_sequence(spec, 0, 1, 4, 1, 2), std::invalid_argument);
}

TEST(ResidueSequence, ConvexDifferencesIncrease) {
  const auto y = residue_sequence(pow15(), kE31, 0, 20483, 17, 12);
  for (std::size_t i = 0; i + 1 < y.differences.size(); ++i) {
    EXPECT_LE(y.differences[i], y.differences[i + 1]);
  }
}

TEST(BuildSegment, HypothesisGuards) {
  EXPECT_THROW(build_segment(SequenceSpec::log(), 1000, 0.09), HypothesisError);
  EXPECT_THROW(build_segment(pow15(), 1000000, 0.05), HypothesisError);  // below eps^-5
  EXPECT_THROW(build_segment(pow15(), Index(1) << 40, 0.05), HypothesisError);  // d2 too large
  EXPECT_THROW(build_segment(pow15(), kE31, 0.2), std::invalid_argument);
  try {
    build_segment(SequenceSpec::log(), 1000, 0.05);
    FAIL();
  } catch (const HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("hypothesis violated"), std::string::npos);
  }
}

TEST(BuildSegment, PowerCaseOne) {
  const auto c = build_segment(pow15(), kE31, 0.05);
  EXPECT_EQ(c.kind, SegmentCase::case1);
  EXPECT_EQ(c.q, 20483);
  ASSERT_TRUE(c.q_next);
  EXPECT_EQ(*c.q_next, 198835);
  EXPECT_EQ(c.m, c.q);
  EXPECT_EQ(c.covered, c.q);
  EXPECT_TRUE(c.checks.all());
  EXPECT_LT(std::fabs(c.alpha), std::pow(0.05, 4));
  EXPECT_LE(c.checks.max_drift, 2.0 / static_cast<double>(c.q));
  EXPECT_NEAR(c.measured_D, 5.36e-5, 1e-6);
  EXPECT_LT(c.bound_ratio, 0.01);
  EXPECT_FALSE(c.negated);
  ASSERT_TRUE(c.witness);
}

TEST(BuildSegment, ThreadsDoNotChangeResult) {
  CertifyOptions one, four;
  four.threads = 4;
  const auto a = build_segment(pow15(), kE31 + 777, 0.05, one);
  const auto b = build_segment(pow15(), kE31 + 777, 0.05, four);
  EXPECT_EQ(a.measured_D, b.measured_D);
  EXPECT_EQ(a.checks.max_drift, b.checks.max_drift);
  EXPECT_EQ(a.q, b.q);
}

TEST(BuildSegment, InterleaveNeedsResidueClasses) {
  const auto c = build_segment(pow15(), kE31, 0.05);
  EXPECT_THROW(interleave_check(c, pow15()), std::invalid_argument);
}

TEST(CertifyRange, ShortPowerRun) {
  std::size_t streamed = 0;
  const auto run = certify_range(pow15(), 0.05, kE31, kE31 + 200000, {},
                                 [&](const SegmentCertificate&) { ++streamed; });
  EXPECT_GE(run.n_end, kE31 + 200000);
  EXPECT_EQ(run.segments.front().n, kE31);
  EXPECT_GE(run.n_start, run.n_epsilon);
  EXPECT_EQ(streamed, run.segments.size());
  ASSERT_GE(run.segments.size(), 3u);
  Index next = kE31;
  for (const auto& s : run.segments) {
    EXPECT_EQ(s.n, next);
    next = s.n + s.covered;
    EXPECT_TRUE(s.checks.all());
    EXPECT_LE(s.bound_ratio, run.constant_C);
  }
  EXPECT_EQ(run.n_end, next);  // segment n covers n+1 .. n+covered
  ASSERT_TRUE(run.aggregation) << run.aggregation_rejected;
  EXPECT_TRUE(run.aggregation->pass);
  EXPECT_EQ(run.aggregate_D, run.aggregation->lhs);
  EXPECT_GE(run.eps_aggregate, 2 * 0.05);
}

TEST(CertifyRange, Errors) {
  EXPECT_THROW(certify_range(SequenceSpec::log(), 0.05, 100, 1000), HypothesisError);
  EXPECT_THROW(certify_range(pow15(), 0.05, Index(1) << 40, (Index(1) << 40) + 10), HypothesisError);
  CertifyOptions strict;
  strict.constant_C = 1e-6;
  try {
    certify_range(pow15(), 0.05, kE31, kE31 + 10, strict);
    FAIL();
  } catch (const CertificationError& e) {
    ASSERT_NE(e.segment(), nullptr);
    EXPECT_EQ(e.segment()->n, kE31);
    EXPECT_NE(std::string(e.what()).find("exceeds C="), std::string::npos);
  }
}
