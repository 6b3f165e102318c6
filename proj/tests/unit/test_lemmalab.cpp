#include "equidist/lemmalab.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace equidist;

namespace {

const LemmaCheck& accepted(const CheckResult& r) {
  if (const auto* rej = std::get_if<Rejected>(&r)) {
    ADD_FAILURE() << "rejected: " << rej->reason;
    static const LemmaCheck empty;
    return empty;
  }
  return std::get<LemmaCheck>(r);
}

bool rejected(const CheckResult& r) { return std::holds_alternative<Rejected>(r); }

// Triangular numbers: dy = 1, 2, 3, 4 and d2y = 1.
const RealSequence kTriangular({0, 1, 3, 6, 10});

}  // namespace

TEST(MakeCheck, Tolerance) {
  EXPECT_TRUE(make_check(LemmaId::L3, 1.0, 1.0).pass);
  EXPECT_TRUE(make_check(LemmaId::L3, 1.0 + 5e-10, 1.0).pass);
  EXPECT_FALSE(make_check(LemmaId::L3, 1.0 + 1e-8, 1.0).pass);
  EXPECT_DOUBLE_EQ(make_check(LemmaId::L3, 2.0, 3.0).margin, 1.0);
}

TEST(LemmaId, RoundTrip) {
  for (LemmaId id : {LemmaId::L3, LemmaId::L5, LemmaId::L5_remark, LemmaId::L6, LemmaId::L7, LemmaId::L1,
                     LemmaId::L2, LemmaId::L4, LemmaId::L8, LemmaId::Chebyshev}) {
    EXPECT_EQ(parse_lemma_id(to_string(id)), id);
  }
  EXPECT_FALSE(parse_lemma_id("L99"));
}

TEST(Counting, ClosedAndHalfOpen) {
  const std::vector<double> y{0, 1, 3, 6, 10};
  EXPECT_EQ(count_closed(y, 1, 6), 3u);
  EXPECT_EQ(count_half_open(y, 1, 6), 2u);
}

TEST(CountingBound, Triangular) {
  const auto& c = accepted(check_counting_bound(kTriangular, 0, 10));
  EXPECT_EQ(c.lhs, 5.0);
  EXPECT_NEAR(c.rhs, std::sqrt(20.0) + 2, 1e-12);
  EXPECT_TRUE(c.pass);
  EXPECT_TRUE(rejected(check_counting_bound(kTriangular, 3, 1)));
  EXPECT_TRUE(rejected(check_counting_bound(RealSequence({0, 1, 2, 3}), 0, 3)));  // d2y = 0
}

TEST(LengthLowerBound, Triangular) {
  const auto& c = accepted(check_length_lower_bound(kTriangular));
  EXPECT_NEAR(c.lhs, std::sqrt(20.0), 1e-12);
  EXPECT_EQ(c.rhs, 5.0);
  EXPECT_TRUE(c.pass);
}

TEST(IntervalComparison, Triangular) {
  const auto& c = accepted(check_interval_comparison(kTriangular, {0, 2}, {2, 10}));
  EXPECT_NEAR(c.lhs, 1.0 / 8, 1e-15);
  EXPECT_NEAR(c.rhs, 3.0 / 2, 1e-15);
  EXPECT_TRUE(c.pass);
  EXPECT_TRUE(rejected(check_interval_comparison(kTriangular, {2, 10}, {0, 2})));
  EXPECT_TRUE(rejected(check_interval_comparison(RealSequence({3, 2, 1}), {1, 2}, {2, 3})));
}

TEST(DiscrepancyBounds, L5AndRemark) {
  const RealSequence y({0, 0.1, 0.3, 0.6, 1.0});
  const auto& c = accepted(check_discrepancy_bound_L5(y));
  EXPECT_TRUE(c.pass);
  const auto& r = accepted(check_discrepancy_bound_L5_remark(y));
  EXPECT_TRUE(r.pass);
  EXPECT_GE(r.rhs, c.rhs);  // max |dy| >= mean step
  EXPECT_TRUE(rejected(check_discrepancy_bound_L5(RealSequence({1.0}))));
  EXPECT_TRUE(rejected(check_discrepancy_bound_L5(RealSequence({0.5, 0.5}))));
}

TEST(DiscrepancyBounds, L1RatioOnPowerSamples) {
  // y_k = k^1.5 / 100: increasing, with d2y positive and decreasing, so K = 1.
  std::vector<double> v;
  for (int k = 1; k <= 2000; ++k) v.push_back(std::pow(static_cast<double>(k), 1.5) / 100);
  const auto& c = accepted(check_discrepancy_bound_L1(RealSequence(v), 1.0));
  ASSERT_TRUE(c.ratio);
  EXPECT_TRUE(c.pass);
  EXPECT_GT(*c.ratio, 0.0);
  EXPECT_LT(*c.ratio, 10.0);
  EXPECT_TRUE(rejected(check_discrepancy_bound_L1(RealSequence({0, 1, 3}), 0.5)));
  EXPECT_TRUE(rejected(check_discrepancy_bound_L1(RealSequence({0, 1}), 1.0)));
  EXPECT_TRUE(rejected(check_discrepancy_bound_L1(RealSequence({0, 1, 3, 4}), 1.0)));  // d2y rises
}

TEST(Perturbation, SmallShift) {
  const RealSequence x({0.1, 0.35, 0.6, 0.85});
  const RealSequence y({0.12, 0.33, 0.61, 0.86});
  const auto& c = accepted(check_perturbation(x, y, 0.03));
  EXPECT_TRUE(c.pass);
  EXPECT_TRUE(rejected(check_perturbation(x, y, 0.01)));
  EXPECT_TRUE(rejected(check_perturbation(x, RealSequence({0.1}), 0.5)));
}

TEST(Merge, Interleaved) {
  const auto& c = accepted(check_merge({RealSequence({0, 0.5}), RealSequence({0.25, 0.75})}));
  EXPECT_NEAR(c.lhs, 0.25, 1e-15);
  EXPECT_NEAR(c.rhs, 0.5, 1e-11);
  EXPECT_TRUE(c.pass);
  EXPECT_TRUE(rejected(check_merge({})));
}

TEST(Chebyshev, EqualityAndRejection) {
  const auto& c = accepted(check_chebyshev(RealSequence({3, 2, 1}), RealSequence({3, 2, 1})));
  EXPECT_EQ(c.lhs, 36.0);
  EXPECT_NEAR(c.rhs, 42.0, 1e-9);
  const auto& eq = accepted(check_chebyshev(RealSequence({2, 2}), RealSequence({5, 1})));
  EXPECT_NEAR(eq.margin, 0.0, 1e-9);
  EXPECT_TRUE(eq.pass);
  EXPECT_TRUE(rejected(check_chebyshev(RealSequence({1, 2}), RealSequence({2, 1}))));
  EXPECT_TRUE(rejected(check_chebyshev(RealSequence({1, -1}), RealSequence({2, 1}))));
}

TEST(BlockAggregation, EquispacedBlocks) {
  // 100 arbitrary head points, then blocks (100,110], (110,121], ... each an equispaced set.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(0, 1);
  std::vector<double> x;
  for (int i = 0; i < 100; ++i) x.push_back(dist(rng));
  const std::vector<Index> cuts{100, 110, 121, 133, 146, 160};
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const auto s = static_cast<int>(cuts[j + 1] - cuts[j]);
    for (int i = 0; i < s; ++i) x.push_back(5.0 + static_cast<double>(i) / s);
  }
  const RealSequence xs(x);
  const auto& c = accepted(check_block_aggregation(xs, 0.2, cuts));
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.rhs, 0.4 + 100.0 / 160 + 14.0 / 160 + 1e-9, 1e-12);

  EXPECT_TRUE(rejected(check_block_aggregation(xs, 0.05, cuts)));           // 121/110 > 1.05
  EXPECT_TRUE(rejected(check_block_aggregation(xs, 0.2, {100})));           // one cut
  EXPECT_TRUE(rejected(check_block_aggregation(xs, 0.2, {100, 110, 500})));  // beyond data

  std::vector<double> flat(x);
  for (int i = 100; i < 110; ++i) flat[static_cast<std::size_t>(i)] = 0.5;
  EXPECT_TRUE(rejected(check_block_aggregation(RealSequence(flat), 0.2, cuts)));
}

TEST(Suites, AllPassAndAreDeterministic) {
  SuiteOptions opts;
  opts.accepted_target = 500;
  for (LemmaId id : suite_lemmas()) {
    const auto a = run_suite(id, opts);
    EXPECT_EQ(a.failed, 0u) << to_string(id) << " " << a.first_failure;
    EXPECT_EQ(a.accepted, 500u) << to_string(id);
    EXPECT_EQ(a.trials, a.accepted + a.rejected + a.failed);
    EXPECT_EQ(a.seed, 42u);
    SuiteOptions threaded = opts;
    threaded.threads = 4;
    const auto b = run_suite(id, threaded);
    EXPECT_EQ(a.trials, b.trials) << to_string(id);
    EXPECT_EQ(a.rejected, b.rejected);
    EXPECT_EQ(a.worst_margin, b.worst_margin);
    EXPECT_EQ(a.max_ratio, b.max_ratio);
    if (id == LemmaId::L1) {
      ASSERT_TRUE(a.max_ratio);
      EXPECT_LT(*a.max_ratio, opts.constant);
    }
  }
}

TEST(Suites, InstancesAreReproducible) {
  for (LemmaId id : suite_lemmas()) {
    const auto a = run_instance(id, 7, 123);
    const auto b = run_instance(id, 7, 123);
    ASSERT_EQ(a.index(), b.index());
    if (const auto* c = std::get_if<LemmaCheck>(&a)) {
      EXPECT_EQ(c->instance_digest, std::get<LemmaCheck>(b).instance_digest);
      EXPECT_EQ(c->instance_digest.rfind(std::string(to_string(id)) + ":seed=7:i=123:", 0), 0u)
          << c->instance_digest;
    }
  }
  EXPECT_TRUE(rejected(run_instance(LemmaId::L4, 1, 1)));
}

TEST(Suites, SeedChangesInstances) {
  const auto a = run_instance(LemmaId::L3, 1, 0);
  const auto b = run_instance(LemmaId::L3, 2, 0);
  if (std::holds_alternative<LemmaCheck>(a) && std::holds_alternative<LemmaCheck>(b)) {
    EXPECT_NE(std::get<LemmaCheck>(a).instance_digest, std::get<LemmaCheck>(b).instance_digest);
  }
}
