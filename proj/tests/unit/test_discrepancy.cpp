#include "equidist/discrepancy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace equidist;

namespace {

UnitSequence unit(std::vector<double> v) { return UnitSequence(std::move(v)); }

// Points with deliberate duplicates and grid values.
std::vector<double> random_points(std::mt19937_64& rng, std::size_t m) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(m);
  const int mode = static_cast<int>(rng() % 3);
  for (double& x : v) {
    if (mode == 0) {
      x = dist(rng);
    } else if (mode == 1) {
      x = static_cast<double>(rng() % 16) / 16.0;
    } else {
      x = 0.3 + 0.2 * dist(rng) * dist(rng);
    }
  }
  return v;
}

}  // namespace

TEST(Count, Examples) {
  const auto u = unit({0.1, 0.5, 0.9});
  EXPECT_EQ(count_in_interval(u, Interval(0, 1)), 3u);
  EXPECT_EQ(count_in_interval(u, Interval(0.5, 0.9)), 1u);
  EXPECT_EQ(count_in_interval(fractional_parts(RealSequence({1.25, 2.25})), Interval(0.2, 0.3)), 2u);
  EXPECT_THROW(Interval(0.5, 0.5), std::invalid_argument);
  EXPECT_THROW(Interval(-0.1, 0.5), std::invalid_argument);
}

TEST(Extreme, Examples) {
  EXPECT_DOUBLE_EQ(extreme_discrepancy(unit({0, 0.25, 0.5, 0.75})).value, 0.25);
  std::vector<double> z;
  for (int j = 1; j <= 5; ++j) z.push_back(static_cast<double>((3 * j) % 5) / 5.0);
  EXPECT_NEAR(extreme_discrepancy(unit(z)).value, 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(extreme_discrepancy(unit({0.5})).value, 1.0);
  EXPECT_DOUBLE_EQ(extreme_discrepancy(unit({0.0, 0.5})).value, 0.5);
  EXPECT_THROW(extreme_discrepancy(UnitSequence{}), std::invalid_argument);
}

TEST(Oracle, Examples) {
  EXPECT_DOUBLE_EQ(extreme_discrepancy_oracle(unit({0.5})).value, 1.0);
  for (int m : {1, 2, 7, 32}) {
    std::vector<double> v;
    for (int i = 0; i < m; ++i) v.push_back(static_cast<double>(i) / m);
    EXPECT_NEAR(extreme_discrepancy_oracle(unit(v)).value, 1.0 / m, 1e-15);
  }
  EXPECT_THROW(extreme_discrepancy_oracle(unit(std::vector<double>(11, 0.5)), 10), std::length_error);
}

TEST(Oracle, MatchesIndependentBruteForce) {
  // Values from a separate Python brute force over closed and open intervals.
  EXPECT_DOUBLE_EQ(extreme_discrepancy_oracle(unit({0.0, 0.25, 0.5, 0.75})).value, 0.25);
  EXPECT_DOUBLE_EQ(extreme_discrepancy_oracle(unit({0.0, 0.5})).value, 0.5);
  EXPECT_NEAR(extreme_discrepancy_oracle(unit({0.1, 0.1, 0.1, 0.9})).value, 0.8, 1e-15);
}

TEST(Extreme, FastEqualsOracleOnRandomInstances) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto v = random_points(rng, 1 + rng() % 200);
    const auto fast = extreme_discrepancy(v);
    const auto oracle = extreme_discrepancy_oracle(v);
    ASSERT_NEAR(fast.value, oracle.value, 1e-12) << "trial " << trial;
    ASSERT_TRUE(fast.witness && oracle.witness);
    if (fast.value < 1.0) {
      EXPECT_NEAR(std::fabs(witness_deviation(v, *fast.witness)), fast.value, 1e-12);
    }
    EXPECT_NEAR(std::fabs(witness_deviation(v, *oracle.witness)), oracle.value, 1e-12);
  }
}

TEST(Extreme, BoundsPermutationAndShift) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = random_points(rng, 1 + rng() % 100);
    const double m = static_cast<double>(v.size());
    const double d = extreme_discrepancy(v).value;
    EXPECT_GE(d, 1.0 / m - 1e-15);
    EXPECT_LE(d, 1.0);
    std::shuffle(v.begin(), v.end(), rng);
    EXPECT_EQ(extreme_discrepancy(v).value, d);
    std::vector<double> shifted(v);
    for (double& x : shifted) x += static_cast<double>(static_cast<int>(rng() % 9) - 4);
    // x + k - k is not exact in binary, so allow a few ulps.
    EXPECT_NEAR(extreme_discrepancy(fractional_parts(RealSequence(shifted))).value, d, 1e-14);
    EXPECT_EQ(count_in_interval(UnitSequence(v), Interval(0, 1)), v.size());
  }
}

TEST(Star, ExamplesAndSandwich) {
  EXPECT_DOUBLE_EQ(star_discrepancy(unit({0.25, 0.75})), 0.25);
  EXPECT_DOUBLE_EQ(star_discrepancy(unit({0.5})), 0.5);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto v = random_points(rng, 1 + rng() % 100);
    const double star = star_discrepancy(v);
    const double extreme = extreme_discrepancy(v).value;
    EXPECT_LE(star, extreme + 1e-15);
    EXPECT_LE(extreme, 2 * star + 1e-15);
  }
}

TEST(Extreme, FrozenOracleValues) {
  // Values from an independent mpmath evaluation (30 digits, then sorted).
  const auto sqrt2 = make_sequence(SequenceSpec::linear("sqrt2"));
  EXPECT_NEAR(extreme_discrepancy(generate_fractional(*sqrt2, 1, 10000)).value, 0.0004921024805673343, 1e-12);
  const auto pow15 = make_sequence(SequenceSpec::power(1.5));
  EXPECT_NEAR(extreme_discrepancy(generate_fractional(*pow15, 1, 100000)).value, 0.025816679655546338, 1e-12);
  const auto lg = make_sequence(SequenceSpec::log());
  EXPECT_NEAR(extreme_discrepancy(generate_fractional(*lg, 1, 1000)).value, 0.12494651875173907, 1e-12);
  EXPECT_NEAR(extreme_discrepancy(generate_fractional(*lg, 1, 100000)).value, 0.12332318384273436, 1e-12);
}

TEST(Streamed, EqualsInMemory) {
  const auto seq = make_sequence(SequenceSpec::power(1.5));
  const auto in_memory = extreme_discrepancy(generate_fractional(*seq, 1, 50000));
  StreamOptions tight;
  tight.memory_points = 1000;
  tight.bucket_bits = 8;
  const auto streamed = extreme_discrepancy_streamed(sequence_points(*seq, 1, 1, 50000), tight);
  EXPECT_EQ(streamed.value, in_memory.value);
  EXPECT_EQ(streamed.method, DiscrepancyMethod::streamed);
  ASSERT_TRUE(streamed.witness);
  EXPECT_EQ(streamed.witness->a, in_memory.witness->a);
  EXPECT_EQ(streamed.witness->b, in_memory.witness->b);

  // Strided source with duplicates across buckets.
  const auto quad = make_sequence(SequenceSpec::quadratic("0.5", "0"));
  const auto a = extreme_discrepancy(generate_fractional(*quad, 1, 4000));
  const auto b = extreme_discrepancy_streamed(sequence_points(*quad, 1, 1, 4000), tight);
  EXPECT_EQ(a.value, b.value);
}

TEST(Streamed, RejectsBadOptions) {
  const auto seq = make_sequence(SequenceSpec::log());
  StreamOptions bad;
  bad.memory_points = 0;
  EXPECT_THROW(extreme_discrepancy_streamed(sequence_points(*seq, 1, 1, 10), bad), std::invalid_argument);
  EXPECT_THROW(sequence_points(*seq, 1, 0, 10), std::invalid_argument);
  EXPECT_THROW(sequence_points(*seq, 1, 1, 0), std::invalid_argument);
}
