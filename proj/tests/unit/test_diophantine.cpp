#include "equidist/diophantine.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace equidist;

namespace {

using PQ = std::vector<std::pair<long long, long long>>;

PQ pairs(const std::vector<Convergent>& cs) {
  PQ out;
  for (const auto& c : cs) out.emplace_back(static_cast<long long>(c.p), static_cast<long long>(c.q));
  return out;
}

void expect_valid(const std::vector<Convergent>& cs, const Real& theta) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const auto& c = cs[i];
    EXPECT_EQ(gcd(c.p, c.q), 1);
    if (i + 1 < cs.size()) {
      EXPECT_LT(c.q, cs[i + 1].q);
      ASSERT_TRUE(c.q_next);
      EXPECT_EQ(*c.q_next, cs[i + 1].q);
      // consecutive convergents: |p q' - p' q| = 1
      const Index det = c.p * cs[i + 1].q - cs[i + 1].p * c.q;
      EXPECT_EQ(index_abs(det), 1);
    }
    const Real err = abs(theta - to_real(c.p) / to_real(c.q));
    EXPECT_NEAR(err.convert_to<double>(), c.abs_error, 1e-300 + 1e-15 * c.abs_error);
    if (c.q_next) {
      EXPECT_LE(err, 1 / (to_real(c.q) * to_real(*c.q_next)));
    }
  }
}

}  // namespace

TEST(Convergents, Sqrt2) {
  const auto cs = convergents(RealExpr::parse("sqrt2"), 100);
  EXPECT_EQ(pairs(cs), (PQ{{1, 1}, {3, 2}, {7, 5}, {17, 12}, {41, 29}, {99, 70}}));
  EXPECT_EQ(*cs.back().q_next, 169);
  expect_valid(cs, sqrt(Real(2)));
}

TEST(Convergents, PiMatchesOracle) {
  const auto cs = convergents(RealExpr::parse("pi"), 100000);
  EXPECT_EQ(pairs(cs), (PQ{{3, 1}, {22, 7}, {333, 106}, {355, 113}, {103993, 33102}, {104348, 33215},
                        {208341, 66317}, {312689, 99532}}));
  EXPECT_EQ(*cs.back().q_next, 265381);
  expect_valid(cs, boost::math::constants::pi<Real>());
}

TEST(Convergents, EDropsDuplicateLeadingDenominator) {
  // [2; 1, 2, 1, 1, 4, ...] starts with 2/1 and 3/1; only 3/1 is kept.
  const auto cs = convergents(RealExpr::parse("e"), 600);
  EXPECT_EQ(pairs(cs), (PQ{{3, 1}, {8, 3}, {11, 4}, {19, 7}, {87, 32}, {106, 39}, {193, 71}, {1264, 465}, {1457, 536}}));
  expect_valid(cs, boost::math::constants::e<Real>());
}

TEST(Convergents, GoldenAndRationals) {
  const auto golden = convergents(RealExpr::parse("golden"), 10);
  EXPECT_EQ(pairs(golden), (PQ{{2, 1}, {3, 2}, {5, 3}, {8, 5}, {13, 8}}));
  const auto half = convergents(RealExpr::parse("0.5"), 100);
  EXPECT_EQ(pairs(half), (PQ{{0, 1}, {1, 2}}));
  EXPECT_EQ(*half[0].q_next, 2);
  EXPECT_TRUE(half[1].terminal());
  EXPECT_FALSE(half[1].beyond_trust);
  EXPECT_EQ(half[1].err_bound, 0.0);
  const auto third = convergents(RealExpr::parse("22/7"), 1000);
  EXPECT_EQ(pairs(third), (PQ{{3, 1}, {22, 7}}));
  EXPECT_TRUE(third.back().terminal());
  const auto neg = convergents(RealExpr::parse("-0.5"), 100);
  EXPECT_EQ(neg.back().p, -1);
  EXPECT_EQ(neg.back().q, 2);
}

TEST(Convergents, BadCap) {
  EXPECT_THROW(convergents(RealExpr::parse("pi"), 0), std::invalid_argument);
}

TEST(Convergents, DoubleInputStopsAtTrustHorizon) {
  const auto cs = convergents(RealExpr::from_double(std::numbers::pi), Index(1) << 60);
  ASSERT_FALSE(cs.empty());
  EXPECT_TRUE(cs.back().terminal());
  EXPECT_TRUE(cs.back().beyond_trust);
  EXPECT_LE(cs.back().q, Index(1) << 27);
  // Convergents up to the horizon agree with those of pi itself.
  const auto exact = convergents(RealExpr::parse("pi"), cs.back().q);
  EXPECT_EQ(pairs(cs), pairs(exact));
}

TEST(Convergents, RandomQuadraticIrrationals) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int a = static_cast<int>(rng() % 20) - 10;
    int b = 2 + static_cast<int>(rng() % 97);
    const int root = static_cast<int>(std::sqrt(b));
    if (root * root == b) ++b;
    const int c = 1 + static_cast<int>(rng() % 12);
    const Real theta = (a + sqrt(Real(b))) / c;
    const auto cs = convergents(theta, Index(1) << 40);
    ASSERT_FALSE(cs.empty());
    expect_valid(cs, theta);
    EXPECT_FALSE(cs.back().terminal());
  }
}

TEST(Select, Examples) {
  const auto s = select_convergent(RealExpr::parse("sqrt2"), 0.1);
  EXPECT_EQ(s.p, 8119);
  EXPECT_EQ(s.q, 5741);
  EXPECT_EQ(*s.q_next, 13860);
  const auto g = select_convergent(RealExpr::parse("golden"), 0.1);
  EXPECT_EQ(g.q, 6765);
  EXPECT_EQ(*g.q_next, 10946);
  const auto r = select_convergent(RealExpr::parse("1/3"), 0.1);
  EXPECT_EQ(r.q, 3);
  EXPECT_TRUE(r.terminal());
}

TEST(Select, BracketsTheCeiling) {
  EXPECT_EQ(denominator_ceiling(0.1), 9999);  // double 0.1 is slightly above 1/10
  EXPECT_EQ(denominator_ceiling(0.5), 16);
  EXPECT_EQ(denominator_ceiling(0.05), 159999);  // likewise
  EXPECT_THROW(denominator_ceiling(0.0), std::invalid_argument);
  EXPECT_THROW(denominator_ceiling(1.0), std::invalid_argument);
  for (double eps : {0.09, 0.05, 0.03, 0.011}) {
    for (const char* t : {"pi", "e", "sqrt7", "golden", "sqrt2"}) {
      const auto s = select_convergent(RealExpr::parse(t), eps);
      const Index ceiling = denominator_ceiling(eps);
      EXPECT_LE(s.q, ceiling);
      ASSERT_TRUE(s.q_next);
      EXPECT_GT(*s.q_next, ceiling);
    }
  }
}
