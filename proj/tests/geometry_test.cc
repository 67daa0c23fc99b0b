#include "aluma/geometry.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace aluma {
namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

TEST(VsContainsTest, Examples) {
  VersionSpace ball(2);
  EXPECT_TRUE(vs_contains(ball, v2(0, 0)));
  VersionSpace half = ball.with_constraint(v2(1, 0), 1);
  EXPECT_FALSE(vs_contains(half, v2(-0.5, 0)));
  EXPECT_TRUE(vs_contains(half, v2(0.5, 0.5)));
  EXPECT_FALSE(vs_contains(half, v2(0, 0.5)));  // strict
  EXPECT_FALSE(vs_contains(ball, v2(1, 0.01)));
  EXPECT_THROW(vs_contains(ball, Vector::Zero(3)), std::invalid_argument);
}

TEST(VersionSpaceTest, RejectsBadConstraints) {
  VersionSpace vs(2);
  EXPECT_THROW(vs.with_constraint(v2(0, 0), 1), std::invalid_argument);
  EXPECT_THROW(vs.with_constraint(v2(1, 0), 0), std::invalid_argument);
  EXPECT_THROW(vs.with_constraint(Vector::Ones(3), 1), std::invalid_argument);
  EXPECT_THROW(VersionSpace(0), std::invalid_argument);
}

TEST(ChordTest, Examples) {
  VersionSpace ball(2);
  Chord c = chord(ball, v2(0, 0), v2(1, 0));
  EXPECT_DOUBLE_EQ(c.lo, -1.0);
  EXPECT_DOUBLE_EQ(c.hi, 1.0);

  VersionSpace half = ball.with_constraint(v2(1, 0), 1);
  c = chord(half, v2(0.5, 0), v2(1, 0));
  EXPECT_DOUBLE_EQ(c.lo, -0.5);
  EXPECT_DOUBLE_EQ(c.hi, 0.5);

  VersionSpace quarter = half.with_constraint(v2(0, 1), 1);
  c = chord(quarter, v2(0.3, 0.3), v2(0, 1));
  EXPECT_NEAR(c.lo, -0.3, 1e-15);
  EXPECT_NEAR(c.hi, std::sqrt(1 - 0.09) - 0.3, 1e-15);
}

TEST(ChordTest, Errors) {
  VersionSpace half = VersionSpace(2).with_constraint(v2(1, 0), 1);
  EXPECT_THROW(chord(half, v2(-0.5, 0), v2(1, 0)), std::invalid_argument);
  EXPECT_THROW(chord(half, v2(0.5, 0), v2(0, 0)), std::invalid_argument);
}

// Grid scan oracle for the quarter-disk example.
TEST(ChordTest, MatchesGridScan) {
  VersionSpace quarter =
      VersionSpace(2).with_constraint(v2(1, 0), 1).with_constraint(v2(0, 1), 1);
  const Vector p = v2(0.3, 0.3);
  const Vector dir = v2(0, 1);
  double lo = 0, hi = 0;
  for (double t = 0; t > -2; t -= 1e-6) {
    if (!quarter.contains(p + t * dir)) break;
    lo = t;
  }
  for (double t = 0; t < 2; t += 1e-6) {
    if (!quarter.contains(p + t * dir)) break;
    hi = t;
  }
  const Chord c = chord(quarter, p, dir);
  EXPECT_NEAR(c.lo, lo, 2e-6);
  EXPECT_NEAR(c.hi, hi, 2e-6);
}

TEST(ChordTest, PropertyEndpoints) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 4;
    Vector wstar(d);
    for (int i = 0; i < d; ++i) wstar[i] = normal(rng);
    wstar.normalize();
    VersionSpace vs(d);
    for (int k = 0; k < 1 + trial % 6; ++k) {
      Vector x(d);
      for (int i = 0; i < d; ++i) x[i] = normal(rng);
      vs = vs.with_constraint(x, sign_label(wstar.dot(x)));
    }
    const Vector p = 0.5 * wstar;
    if (!vs.contains(p)) continue;
    Vector dir(d);
    for (int i = 0; i < d; ++i) dir[i] = normal(rng);
    dir.normalize();
    const Chord c = chord(vs, p, dir);
    ASSERT_LT(c.lo, 0.0);
    ASSERT_GT(c.hi, 0.0);
    for (double f : {0.001, 0.25, 0.5, 0.75, 0.999}) {
      ASSERT_TRUE(vs.contains(p + (c.lo + f * (c.hi - c.lo)) * dir));
    }
    EXPECT_FALSE(vs.contains(p + (c.hi + 1e-9) * dir));
    EXPECT_FALSE(vs.contains(p + (c.lo - 1e-9) * dir));
    EXPECT_TRUE(vs.contains(p + (c.hi - 1e-9) * dir));
    EXPECT_TRUE(vs.contains(p + (c.lo + 1e-9) * dir));
  }
}

TEST(MarginOfTest, Examples) {
  RowMatrix pool(1, 2);
  pool << 1, 0;
  std::vector<Label> y = {1};
  EXPECT_DOUBLE_EQ(margin_of(v2(1, 0), pool, y), 1.0);

  RowMatrix pool2(2, 2);
  pool2 << 1, 0, 0, 1;
  std::vector<Label> y2 = {1, -1};
  EXPECT_NEAR(margin_of(v2(1, -1) / std::sqrt(2.0), pool2, y2), 1 / std::sqrt(2.0),
              1e-15);

  const double a = 80.0 * std::numbers::pi / 180.0;
  RowMatrix pool3(1, 2);
  pool3 << std::cos(a), std::sin(a);
  EXPECT_NEAR(margin_of(v2(1, 0), pool3, y), std::cos(a), 1e-15);
  // Scale invariance in w.
  EXPECT_NEAR(margin_of(v2(0.1, 0), pool3, y), std::cos(a), 1e-15);
}

TEST(MarginOfTest, Errors) {
  RowMatrix pool(1, 2);
  pool << 1, 0;
  std::vector<Label> y = {1};
  EXPECT_THROW(margin_of(v2(0, 0), pool, y), std::invalid_argument);
  RowMatrix zero = RowMatrix::Zero(1, 2);
  EXPECT_THROW(margin_of(v2(1, 0), zero, y), std::invalid_argument);
  RowMatrix empty(0, 2);
  EXPECT_THROW(margin_of(v2(1, 0), empty, std::vector<Label>{}), std::invalid_argument);
}

TEST(ArcMeasureTest, Examples) {
  VersionSpace ball(2);
  EXPECT_DOUBLE_EQ(arc_measure_2d(ball), 1.0);
  VersionSpace half = ball.with_constraint(v2(1, 0), 1);
  EXPECT_NEAR(arc_measure_2d(half), 0.5, 1e-15);
  VersionSpace quarter = half.with_constraint(v2(0, 1), 1);
  EXPECT_NEAR(arc_measure_2d(quarter), 0.25, 1e-15);
  EXPECT_THROW(arc_measure_2d(VersionSpace(3)), std::invalid_argument);
  // Contradictory constraints.
  EXPECT_EQ(arc_measure_2d(half.with_constraint(v2(1, 0), -1)), 0.0);
}

TEST(ArcMeasureTest, WraparoundArc) {
  // Constraint pointing at angle pi: directions in (pi/2, 3pi/2).
  VersionSpace vs = VersionSpace(2).with_constraint(v2(-1, 0), 1);
  EXPECT_NEAR(arc_measure_2d(vs), 0.5, 1e-15);
  // Two constraints pointing near angle 0 straddle the wrap point.
  const double e = 0.1;
  vs = VersionSpace(2)
           .with_constraint(v2(std::cos(e), std::sin(e)), 1)
           .with_constraint(v2(std::cos(-e), std::sin(-e)), 1);
  EXPECT_NEAR(arc_measure_2d(vs), (std::numbers::pi - 2 * e) / (2 * std::numbers::pi),
              1e-14);
}

TEST(SplitMeasuresTest, Examples) {
  VersionSpace ball(2);
  SplitMeasure s = split_measures_2d(ball, v2(0.3, -2));
  EXPECT_NEAR(s.plus, 0.5, 1e-15);
  EXPECT_NEAR(s.minus, 0.5, 1e-15);
  VersionSpace half = ball.with_constraint(v2(1, 0), 1);
  s = split_measures_2d(half, v2(1, 0));
  EXPECT_NEAR(s.plus, 0.5, 1e-15);
  EXPECT_NEAR(s.minus, 0.0, 1e-15);
  s = split_measures_2d(half, v2(0, 1));
  EXPECT_NEAR(s.plus, 0.25, 1e-15);
  EXPECT_NEAR(s.minus, 0.25, 1e-15);
  EXPECT_THROW(split_measures_2d(half, v2(0, 0)), std::invalid_argument);
}

// Monotonicity, additivity, and agreement with a fine angular scan.
TEST(ArcMeasureTest, PropertiesAgainstScan) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 300; ++trial) {
    const double phi = ang(rng);
    const Vector wstar = v2(std::cos(phi), std::sin(phi));
    VersionSpace vs(2);
    double prev = 1.0;
    for (int k = 0; k < 1 + trial % 5; ++k) {
      const double a = ang(rng);
      const Vector x = v2(std::cos(a), std::sin(a)) * (0.2 + trial % 3);
      const SplitMeasure s = split_measures_2d(vs, x);
      ASSERT_NEAR(s.plus + s.minus, arc_measure_2d(vs), 1e-12);
      vs = vs.with_constraint(x, sign_label(wstar.dot(x)));
      const double cur = arc_measure_2d(vs);
      ASSERT_LE(cur, prev + 1e-15);
      prev = cur;
    }
    const int kScan = 20000;
    int inside = 0;
    for (int i = 0; i < kScan; ++i) {
      const double t = (i + 0.5) * 2 * std::numbers::pi / kScan;
      inside += vs.contains(0.5 * v2(std::cos(t), std::sin(t)));
    }
    ASSERT_NEAR(static_cast<double>(inside) / kScan, prev, 2.0 * (1 + trial % 5) / kScan);
  }
}

}  // namespace
}  // namespace aluma
