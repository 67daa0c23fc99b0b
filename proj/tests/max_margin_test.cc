#include "aluma/max_margin.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace aluma {
namespace {

TEST(MaxMarginTest, HandValues) {
  RowMatrix a(2, 2);
  a << 1, 0, 0, 1;
  MaxMarginResult r = max_margin(a);
  EXPECT_NEAR(r.lower, 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.upper, 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.w[0], r.w[1], 1e-12);

  a << 1, 0, -1, 0;
  r = max_margin(a);
  EXPECT_EQ(r.lower, 0.0);
  EXPECT_LT(r.upper, 1e-12);
  EXPECT_EQ(r.w.norm(), 0.0);

  RowMatrix one(1, 3);
  one << 0, 2, 0;
  r = max_margin(one);
  EXPECT_NEAR(r.lower, 2.0, 1e-12);
  EXPECT_NEAR(r.w[1], 1.0, 1e-12);
}

TEST(MaxMarginTest, Normalized) {
  RowMatrix a(2, 2);
  a << 10, 0, 0, 0.1;
  EXPECT_NEAR(max_margin_normalized(a).lower, 1 / std::sqrt(2.0), 1e-12);
  a << 1, 0, 0, 0;
  EXPECT_THROW(max_margin_normalized(a), std::invalid_argument);
}

// Independent oracle in 2-D: dense angular scan of min_i <a_i, u>.
TEST(MaxMarginTest, MatchesAngularScan2d) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  std::uniform_real_distribution<double> rad(0.1, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 7;
    const double center = ang(rng);
    const double spread = (trial % 2 == 0) ? 1.2 : 3.5;
    RowMatrix a(n, 2);
    for (int i = 0; i < n; ++i) {
      const double t = center + spread * (ang(rng) / (2 * std::numbers::pi) - 0.5);
      const double r = rad(rng);
      a.row(i) << r * std::cos(t), r * std::sin(t);
    }
    double best = 0.0;
    const int kScan = 200000;
    for (int k = 0; k < kScan; ++k) {
      const double t = 2 * std::numbers::pi * k / kScan;
      const Eigen::Vector2d u(std::cos(t), std::sin(t));
      best = std::max(best, (a * u).minCoeff());
    }
    const MaxMarginResult r = max_margin(a);
    ASSERT_LE(r.lower, r.upper + 1e-15);
    ASSERT_NEAR(r.lower, best, 1e-4) << "trial " << trial;
    ASSERT_GE(r.lower + 1e-12, best);
  }
}

// Duality gap closes on random feasible and infeasible sets in higher d.
TEST(MaxMarginTest, CertifiedBoundsHigherDim) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 3 + trial % 9;
    const int n = 5 + trial % 200;
    Eigen::VectorXd wstar(d);
    for (int i = 0; i < d; ++i) wstar[i] = normal(rng);
    wstar.normalize();
    RowMatrix a(n, d);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
      if (trial % 3 != 0 && a.row(i).dot(wstar) < 0) a.row(i) *= -1;
    }
    const MaxMarginResult r = max_margin(a);
    ASSERT_LE(r.lower, r.upper + 1e-15);
    if (trial % 3 != 0) {
      ASSERT_GT(r.lower, 0.0);
      ASSERT_NEAR(r.lower, r.upper, 1e-8 * a.rowwise().norm().maxCoeff());
      ASSERT_GE(r.lower + 1e-12, (a * wstar).minCoeff());
    }
  }
}

}  // namespace
}  // namespace aluma
