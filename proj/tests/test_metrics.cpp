#include <gtest/gtest.h>

#include <numeric>

#include "aiecon/metrics.hpp"
#include "oracles.hpp"

using namespace aiecon;
using namespace aiecon::metrics;

TEST(Metrics, HandValues) {
  const std::vector<double> c{1, 2, 3};
  EXPECT_NEAR(gini(c), 8.0 / 36.0, 1e-12);
  EXPECT_NEAR(equality(c), 1.0 - 1.5 * 8.0 / 36.0, 1e-12);
  EXPECT_EQ(productivity(c), 6.0);
  EXPECT_EQ(maximin(c), 1.0);
  EXPECT_NEAR(swf_eq_prod(c), 4.0, 1e-12);
}

TEST(Metrics, ExtremeDistributions) {
  const std::vector<double> equal(5, 7.0);
  EXPECT_EQ(gini(equal), 0.0);
  EXPECT_EQ(equality(equal), 1.0);
  EXPECT_EQ(swf_eq_prod(equal), 35.0);
  const std::vector<double> top{0, 0, 0, 9};
  EXPECT_DOUBLE_EQ(gini(top), 0.75);
  EXPECT_NEAR(equality(top), 0.0, 1e-15);
  EXPECT_NEAR(swf_eq_prod(top), 0.0, 1e-12);
  const std::vector<double> zeros(4, 0.0);
  EXPECT_EQ(gini(zeros), 0.0);
  EXPECT_EQ(productivity(zeros), 0.0);
}

TEST(Metrics, GiniNeedsTwoAgents) { EXPECT_THROW(gini(std::vector<double>{3.0}), std::invalid_argument); }

TEST(Metrics, InverseIncomeWeights) {
  const std::vector<double> c{1, 3}, u{2, 4};
  const auto w = inverse_income_weights(c);
  EXPECT_DOUBLE_EQ(w[0], 0.75);
  EXPECT_DOUBLE_EQ(w[1], 0.25);
  EXPECT_DOUBLE_EQ(swf_inverse_income(u, c), 2.5);
  const std::vector<double> same(4, 5.0), util{1, 2, 3, 6};
  EXPECT_DOUBLE_EQ(swf_inverse_income(util, same), 3.0);
}

TEST(Metrics, RandomVectorProperties) {
  Rng rng(5);
  for (int k = 0; k < 20000; ++k) {
    const std::size_t n = 2 + rng.below(9);
    std::vector<double> c(n);
    for (auto& x : c) x = rng.bernoulli(0.2) ? 0.0 : 100.0 * rng.uniform01();
    if (std::accumulate(c.begin(), c.end(), 0.0) <= 0.0) continue;
    const double g = gini(c);
    EXPECT_NEAR(g, oracle::gini(c), 1e-12);
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, (n - 1.0) / n + 1e-15);
    const double eq = equality(c);
    EXPECT_GE(eq, -1e-15);
    EXPECT_LE(eq, 1.0);
    EXPECT_LE(swf_eq_prod(c), productivity(c) + 1e-9);
    EXPECT_LE(maximin(c), productivity(c) / n + 1e-12);
    double fold = 0.0;
    for (double x : c) fold += x;
    EXPECT_NEAR(productivity(c), fold, 1e-9);

    const double scale = 0.01 + 50 * rng.uniform01();
    std::vector<double> scaled(c);
    for (auto& x : scaled) x *= scale;
    EXPECT_NEAR(gini(scaled), g, 1e-12);

    const auto w = inverse_income_weights(c);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Metrics, Correlation) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> neg, affine;
  for (double v : x) {
    neg.push_back(-v);
    affine.push_back(2 * v + 1);
  }
  EXPECT_NEAR(*correlate(x, x), 1.0, 1e-15);
  EXPECT_NEAR(*correlate(x, neg), -1.0, 1e-15);
  EXPECT_NEAR(*correlate(x, affine), 1.0, 1e-15);
  EXPECT_FALSE(correlate(x, std::vector<double>(5, 2.0)));
  EXPECT_FALSE(correlate(std::vector<double>{1, 2}, std::vector<double>{2, 1}));
}

TEST(Metrics, SnapshotAgreesWithParts) {
  const std::vector<double> c{3, 9, 0, 4}, u{1, 2, -1, 0.5};
  const auto s = snapshot(12, c, u);
  EXPECT_EQ(s.step, 12);
  EXPECT_EQ(s.gini, gini(c));
  EXPECT_EQ(s.eq, equality(c));
  EXPECT_EQ(s.prod, 16.0);
  EXPECT_EQ(s.maximin, 0.0);
  EXPECT_EQ(s.swf_eq_times_prod, swf_eq_prod(c));
  EXPECT_EQ(s.swf_inverse_income, swf_inverse_income(u, c));
}
