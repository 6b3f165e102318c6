#include "equidist/weyl.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace equidist;

TEST(Weyl, IntegerPhasesGiveOne) {
  const auto p = weyl_sum(RealSequence({0, 1, 2, 3}), 1);
  EXPECT_NEAR(p.magnitude, 1.0, 1e-15);
  EXPECT_EQ(p.N, 4);
  EXPECT_NEAR(weyl_sum(RealSequence({5, -7}), 3).magnitude, 1.0, 1e-15);
}

TEST(Weyl, HalfStepCancels) {
  EXPECT_NEAR(weyl_sum(RealSequence({0.5, 1.0}), 1).magnitude, 0.0, 1e-15);
  EXPECT_NEAR(weyl_sum(RealSequence({0.25, 0.5, 0.75, 1.0}), 1).magnitude, 0.0, 1e-15);
  EXPECT_NEAR(weyl_sum(RealSequence({0.25, 0.5, 0.75, 1.0}), 4).magnitude, 1.0, 1e-15);
}

TEST(Weyl, RejectsZeroFrequency) {
  EXPECT_THROW(weyl_sum(RealSequence({0.1}), 0), std::invalid_argument);
}

TEST(Weyl, ShiftInvariantAndConjugate) {
  const RealSequence x({0.1, 0.37, 0.9, 0.42, 0.77});
  const RealSequence shifted({3.1, -1.63, 10.9, 0.42, -4.23});
  for (int h = 1; h <= 5; ++h) {
    const auto a = weyl_sum(x, h);
    const auto b = weyl_sum(shifted, h);
    EXPECT_NEAR(std::abs(a.sum - b.sum), 0.0, 1e-12);
    const auto c = weyl_sum(x, -h);
    EXPECT_NEAR(std::abs(c.sum - std::conj(a.sum)), 0.0, 1e-15);
    EXPECT_LE(a.magnitude, 1.0 + 1e-15);
  }
}

TEST(Weyl, LinearGeometricSeries) {
  // sum_{k=1}^N e(k theta) = e(theta)(1 - e(N theta))/(1 - e(theta))
  const auto seq = make_sequence(SequenceSpec::linear("sqrt2"));
  const std::int64_t N = 1000;
  const auto u = generate_fractional(*seq, 1, N);
  const double theta = std::numbers::sqrt2;
  const double expected = std::fabs(std::sin(std::numbers::pi * N * theta) / std::sin(std::numbers::pi * theta)) / N;
  EXPECT_NEAR(weyl_sum_fractional(u, 1).magnitude, expected, 1e-12);
}

TEST(Weyl, LogDoesNotDecay) {
  // |S_N(1)| -> 1/sqrt(1 + 4 pi^2) for x_n = log n.
  const auto rows = weyl_profile(SequenceSpec::log(), 1, {1000000});
  ASSERT_EQ(rows.size(), 2u);
  const double limit = 1 / std::sqrt(1 + 4 * std::numbers::pi * std::numbers::pi);
  EXPECT_NEAR(rows[1].magnitude, 0.15717634220125662, 1e-12);
  EXPECT_NEAR(rows[1].magnitude, limit, 1e-5);
  EXPECT_NEAR(rows[0].magnitude, rows[1].magnitude, 1e-15);
}

TEST(Weyl, ProfileOrderingAndThreads) {
  const auto a = weyl_profile(SequenceSpec::power(1.5), 3, {10, 1000}, 1);
  const auto b = weyl_profile(SequenceSpec::power(1.5), 3, {10, 1000}, 4);
  ASSERT_EQ(a.size(), 12u);
  std::vector<std::pair<std::int64_t, std::int64_t>> order;
  for (const auto& r : a) order.emplace_back(r.h, r.N);
  EXPECT_EQ(order.front(), std::make_pair(std::int64_t{-3}, std::int64_t{10}));
  EXPECT_EQ(order.back(), std::make_pair(std::int64_t{3}, std::int64_t{1000}));
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].sum, b[i].sum);
  }
  EXPECT_THROW(weyl_profile(SequenceSpec::log(), 0, {10}), std::invalid_argument);
}

TEST(Weyl, CsvHeader) {
  std::ostringstream out;
  write_weyl_csv(out, weyl_profile(SequenceSpec::log(), 1, {10}));
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("h,N,re,im,magnitude\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}
