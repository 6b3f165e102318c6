// Second-order segments at the first scale where the quadratic family meets
// the second-difference window for eps = 0.0999. Each builds one segment.

#include "equidist/certifier.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace equidist;

namespace {

constexpr double kEps = 0.0999;

CertifyOptions big_memory() {
  CertifyOptions o;
  o.stream.memory_points = std::size_t{1} << 26;
  return o;
}

void expect_common(const SegmentCertificate& c) {
  EXPECT_TRUE(c.checks.all());
  EXPECT_LE(c.bound_ratio, 10.0);
  EXPECT_LE(c.measured_D, c.class_max_D + 1e-12);
  EXPECT_LT(std::fabs(c.alpha), std::pow(kEps, 4));
  EXPECT_EQ(c.covered, c.q * c.m);
  EXPECT_EQ(c.h_values.size(), static_cast<std::size_t>(c.q + 1));
}

}  // namespace

TEST(Scale, CaseTwoTwo) {
  const auto c = build_segment(SequenceSpec::quadratic("0.490082", "9e-13"), 11000000000, kEps, big_memory());
  EXPECT_EQ(c.kind, SegmentCase::case2_2);
  EXPECT_EQ(c.p, 1);
  EXPECT_EQ(c.q, 2);
  ASSERT_TRUE(c.h0 && c.h0->h);
  EXPECT_EQ(*c.h0->h, 10000000);
  EXPECT_EQ(c.m, 9999998);
  ASSERT_TRUE(c.delta);
  EXPECT_NEAR(*c.delta, 3.6e-12, 1e-13);
  EXPECT_NEAR(c.alpha, -3.6e-5, 1e-6);
  EXPECT_NEAR(c.measured_D, 0.00787, 1e-4);
  expect_common(c);
  CertifyOptions o = big_memory();
  const auto l8 = interleave_check(c, SequenceSpec::quadratic("0.490082", "9e-13"), o.stream);
  EXPECT_TRUE(l8.pass);
  EXPECT_NEAR(l8.lhs, c.measured_D, 1e-15);
}

TEST(Scale, CaseTwoTwoNeedsSmallerEps) {
  EXPECT_THROW(build_segment(SequenceSpec::quadratic("0.490082", "9e-13"), 11000000000, 0.05), HypothesisError);
}

TEST(Scale, CaseTwoThree) {
  const auto c = build_segment(SequenceSpec::quadratic("0.49011", "9e-13"), 11000000000, kEps, big_memory());
  EXPECT_EQ(c.kind, SegmentCase::case2_3);
  ASSERT_TRUE(c.h0 && c.h0->h);
  EXPECT_EQ(*c.h0->h, 0);
  EXPECT_EQ(c.m, 69335685);
  EXPECT_NEAR(c.alpha, 2e-5, 1e-6);
  EXPECT_NEAR(c.measured_D, 2.45e-5, 1e-6);
  ASSERT_TRUE(c.threshold_ratio);
  expect_common(c);
}

TEST(Scale, CaseTwoOne) {
  const auto c = build_segment(SequenceSpec::quadratic("0.99671", "1e-13"), 32000000000, kEps, big_memory());
  EXPECT_EQ(c.kind, SegmentCase::case2_1);
  EXPECT_EQ(c.q, 1);
  ASSERT_TRUE(c.h0 && c.h0->h);
  EXPECT_EQ(*c.h0->h, 900000001);
  EXPECT_EQ(c.m, 319360319);
  EXPECT_NEAR(c.measured_D, 6.2e-6, 2e-7);
  expect_common(c);
  // q = 1: the union is the single class.
  EXPECT_EQ(c.measured_D, c.class_max_D);
}
