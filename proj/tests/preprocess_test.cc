#include "aluma/preprocess.h"

#include <cmath>

#include <gtest/gtest.h>

#include "aluma/max_margin.h"
#include "aluma/pools.h"
#include "aluma/rng.h"
#include "test_util.h"

namespace aluma {
namespace {

using testing::labels_of;

double max_abs(const RowMatrix& a) { return a.cwiseAbs().maxCoeff(); }

double best_margin(const RowMatrix& x, const std::vector<Label>& y) {
  return max_margin_normalized(signed_rows(x, y)).lower;
}

// min over |w| <= 1 of the squared margin-gamma hinge, by projected gradient
// (the objective is smooth with Lipschitz gradient 2 |X|^2).
double min_total_hinge(const RowMatrix& x, const std::vector<Label>& y, double gamma) {
  const double lip = 2.0 * x.squaredNorm();
  Vector w = Vector::Zero(x.cols());
  for (int it = 0; it < 20000; ++it) {
    Vector g = Vector::Zero(x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double l = gamma - y[i] * x.row(i).dot(w);
      if (l > 0) g -= 2 * l * y[i] * x.row(i).transpose();
    }
    w -= g / lip;
    if (w.norm() > 1) w.normalize();
  }
  return total_hinge(w, gamma, x, y);
}

TEST(KernelDecomposeTest, Identity) {
  const RowMatrix u = kernel_decompose(RowMatrix::Identity(5, 5));
  EXPECT_LT(max_abs(u.cwiseAbs() - RowMatrix::Identity(5, 5)), 1e-12);
}

TEST(KernelDecomposeTest, AllOnesIsRankOne) {
  const int m = 4;
  const RowMatrix k = RowMatrix::Ones(m, m);
  const RowMatrix u = kernel_decompose(k);
  EXPECT_LT(max_abs(u * u.transpose() - k), 1e-12);
  // Single eigenvalue m: one column of magnitude 1 per row, the rest zero.
  int live = 0;
  for (int c = 0; c < m; ++c) {
    if (u.col(c).norm() > 1e-6) {
      ++live;
      EXPECT_LT((u.col(c).cwiseAbs() - Vector::Ones(m)).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
  EXPECT_EQ(live, 1);
}

TEST(KernelDecomposeTest, ReconstructsGramMatrices) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 5 + trial;
    const int d = 1 + trial % 7;
    const RowMatrix x = RowMatrix::NullaryExpr(m, d, [&] { return 2 * uniform01(rng) - 1; });
    const RowMatrix k = x * x.transpose();
    const RowMatrix u = kernel_decompose(k);
    EXPECT_EQ(u.rows(), m);
    EXPECT_LE(max_abs(u * u.transpose() - k), 1e-8);
  }
}

TEST(KernelDecomposeTest, RejectsBadInput) {
  RowMatrix k(2, 2);
  k << 1, 2, 2, 1;  // eigenvalue -1
  EXPECT_THROW(kernel_decompose(k), std::invalid_argument);
  k << 1, 0.5, 0.4, 1;
  EXPECT_THROW(kernel_decompose(k), std::invalid_argument);
  EXPECT_THROW(kernel_decompose(RowMatrix(2, 3)), std::invalid_argument);
  k << 1, 1, 1, 1 - 1e-12;  // slightly negative from rounding: accepted
  EXPECT_NO_THROW(kernel_decompose(k));
}

TEST(LiftTest, Examples) {
  RowMatrix x(2, 2);
  x << 0.6, 0.8, 0.0, 0.5;
  EXPECT_DOUBLE_EQ(lift_scale(0.0), 1.0);
  const RowMatrix l0 = lift(x, 0.0);
  ASSERT_EQ(l0.cols(), 4);
  EXPECT_EQ(l0.leftCols(2), x);
  EXPECT_EQ(max_abs(l0.rightCols(2)), 0.0);

  const RowMatrix l1 = lift(x, 1.0);
  const double r = std::sqrt(0.5);
  EXPECT_LT(max_abs(l1.leftCols(2) - r * x), 1e-15);
  EXPECT_NEAR(l1(0, 2), r, 1e-15);
  EXPECT_NEAR(l1(1, 3), r, 1e-15);
  EXPECT_EQ(l1(0, 3), 0.0);
  EXPECT_NEAR(l1.row(0).norm(), 1.0, 1e-15);
  EXPECT_LT(l1.row(1).norm(), 1.0);

  EXPECT_THROW(lift(x, -1.0), std::invalid_argument);
  EXPECT_THROW(lift(2 * x, 0.0), std::invalid_argument);
}

TEST(LiftTest, NormIdentity) {
  Rng rng(4);
  for (double h : {0.0, 0.3, 2.0, 50.0}) {
    const double a = lift_scale(h);
    RowMatrix x(20, 3);
    for (int i = 0; i < 20; ++i) x.row(i) = random_ball_point(3, rng).transpose();
    const RowMatrix l = lift(x, h);
    for (int i = 0; i < 20; ++i) {
      EXPECT_NEAR(l.row(i).squaredNorm(), a * a * x.row(i).squaredNorm() + 1 - a * a, 1e-14);
      EXPECT_LE(l.row(i).norm(), 1.0 + 1e-15);
    }
  }
}

TEST(LiftTest, WitnessSeparatesWithShrunkMargin) {
  for (int trial = 0; trial < 100; ++trial) {
    const double gamma = 0.05 + 0.003 * trial;
    const OraclePool p = gen_noisy_margin_pool(40, 4, gamma, 0.05 + 0.001 * trial, trial);
    const std::vector<double> t = p.info.target;
    const Vector w = Eigen::Map<const Vector>(t.data(), 4);
    const double h = p.info.params["hinge"];
    EXPECT_NEAR(h, total_hinge(w, gamma, p.pool.points, p.labels), 1e-12);
    const RowMatrix lifted = lift(p.pool.points, h);
    const Vector wl = lifted_witness(w, gamma, p.pool.points, p.labels, h);
    EXPECT_NEAR(wl.norm(), 1.0, 1e-12);
    const double bound = gamma / (1 + std::sqrt(h));
    for (Eigen::Index i = 0; i < lifted.rows(); ++i) {
      EXPECT_GE(p.labels[i] * lifted.row(i).dot(wl), bound * (1 - 1e-12));
    }
  }
}

TEST(JlProjectTest, ZeroAndDeterminism) {
  const RowMatrix zero = RowMatrix::Zero(3, 7);
  EXPECT_EQ(max_abs(jl_project(zero, 5, 1)), 0.0);
  RowMatrix x(1, 3);
  x << 0.2, -0.4, 0.1;
  EXPECT_EQ(jl_project(x, 300, 8), jl_project(x, 300, 8));
  EXPECT_NE(jl_project(x, 300, 8), jl_project(x, 300, 9));
  // Row r of the sign matrix depends only on (seed, r).
  const RowMatrix a = jl_project(0.01 * x, 300, 8);
  const RowMatrix b = jl_project(0.01 * x, 700, 8);
  EXPECT_LT(max_abs(a * std::sqrt(300.0) - b.leftCols(300) * std::sqrt(700.0)), 1e-15);
  EXPECT_THROW(jl_project(x, 0, 1), std::invalid_argument);
}

TEST(JlProjectTest, NormsConcentrate) {
  Rng rng(6);
  RowMatrix x(1000, 40);
  for (int i = 0; i < 1000; ++i) x.row(i) = random_unit_vector(40, rng).transpose();
  // Project without clamping to see the raw norm.
  const RowMatrix y = jl_project(0.5 * x, 2000, 3) * 2.0;
  int inside = 0;
  for (int i = 0; i < 1000; ++i) inside += std::abs(y.row(i).norm() - 1) <= 0.1;
  EXPECT_GE(inside, 990);
  const RowMatrix clamped = jl_project(x, 2000, 3);
  EXPECT_LE(clamped.rowwise().norm().maxCoeff(), 1.0 + 1e-12);
}

TEST(JlProjectTest, MarginPreservation) {
  const double eta = 0.3;
  const double delta = 0.1;
  const int m = 20;
  const int k = static_cast<int>(std::ceil(8 * std::log(m / delta) / (eta * eta)));
  Rng rng(10);
  int ok = 0;
  const int trials = 60;
  for (int trial = 0; trial < trials; ++trial) {
    const Vector w = random_unit_vector(6, rng);
    const RowMatrix x = testing::planted_margin_pool(m, w, eta, rng);
    const auto y = labels_of(w, x);
    ok += best_margin(jl_project(x, k, trial), y) >= eta / 2;
  }
  EXPECT_GE(ok, static_cast<int>(std::ceil((1 - delta) * trials)));
}

TEST(PreprocessTest, BypassAndToy) {
  RowMatrix x(2, 1);
  x << 0.5, -1.0;
  PreprocessParams p;
  p.gamma = 0.5;
  p.bypass_projection = true;
  RowMatrix expect(2, 3);
  expect << 0.5, 0, 0, -1, 0, 0;
  EXPECT_EQ(preprocess_vectors(x, p), expect);
  p.hinge_bound = 1.0;
  const double r = std::sqrt(0.5);
  expect << 0.5 * r, r, 0, -r, 0, r;
  EXPECT_LT(max_abs(preprocess_vectors(x, p) - expect), 1e-15);

  p.bypass_projection = false;
  p.delta = 0.1;
  // ceil(8 * 2 * ln(20) / 0.25) = 192
  EXPECT_EQ(default_jl_dim(2, p), 192);
  EXPECT_EQ(preprocess_vectors(x, p).cols(), 192);
  p.jl_dim = 17;
  EXPECT_EQ(preprocess_vectors(x, p).cols(), 17);
  p.gamma = 0;
  EXPECT_THROW(preprocess_vectors(x, p), std::invalid_argument);
}

TEST(PreprocessTest, KernelAndVectorInputsKeepTheMargin) {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector w = random_unit_vector(3, rng);
    const RowMatrix x = testing::planted_margin_pool(25, w, 0.25, rng);
    const auto y = labels_of(w, x);
    PreprocessParams p;
    p.gamma = 0.25;
    p.seed = trial;
    const RowMatrix kern = x * x.transpose();
    p.bypass_projection = true;
    // Same Gram matrix, so the lifted max margins coincide.
    EXPECT_NEAR(best_margin(preprocess_vectors(x, p), y),
                best_margin(preprocess_kernel(kern, p), y), 1e-9);
    p.bypass_projection = false;
    const double mv = best_margin(preprocess_vectors(x, p), y);
    const double mk = best_margin(preprocess_kernel(kern, p), y);
    EXPECT_GT(mv, 0);
    EXPECT_NEAR(mv, mk, 0.1 * std::max(mv, mk));
  }
}

TEST(PreprocessTest, DecompositionsShareTheBestHinge) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const OraclePool p = gen_noisy_margin_pool(15, 3, 0.2, 0.1, trial);
    const RowMatrix v = 0.9 * p.pool.points;
    const RowMatrix u = kernel_decompose(v * v.transpose());
    for (double gamma : {0.1, 0.3}) {
      EXPECT_NEAR(min_total_hinge(v, p.labels, gamma), min_total_hinge(u, p.labels, gamma),
                  1e-3);
    }
  }
}

TEST(TotalHingeTest, Examples) {
  RowMatrix x(2, 2);
  x << 1, 0, 0, 1;
  const Vector w = testing::v2(0.5, 0.5);
  EXPECT_EQ(total_hinge(w, 0.5, x, std::vector<Label>{1, 1}), 0.0);
  EXPECT_EQ(total_hinge(w, 0.4, x, std::vector<Label>{1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(total_hinge(testing::v2(0, 1), 0.3, x.topRows(1), std::vector<Label>{1}),
                   0.09);
  EXPECT_DOUBLE_EQ(total_hinge(w, 0.5, x, std::vector<Label>{1, -1}), 1.0);
}

TEST(SvmTrainTest, Examples) {
  const Vector x = (Vector(3) << 0.3, -0.2, 0.6).finished();
  RowMatrix pair(2, 3);
  pair.row(0) = x.transpose();
  pair.row(1) = -x.transpose();
  const Vector w = svm_train(pair, std::vector<Label>{1, -1}, {});
  EXPECT_GT(w.dot(x) / (w.norm() * x.norm()), 1 - 1e-12);
  EXPECT_LE(w.norm(), 1 + 1e-12);

  const Vector single = svm_train(pair.topRows(1), std::vector<Label>{1}, {});
  EXPECT_GT(single.dot(x), 0);

  Rng rng(14);
  const Vector target = random_unit_vector(2, rng);
  const RowMatrix pts = testing::planted_margin_pool(60, target, 0.1, rng);
  const auto y = labels_of(target, pts);
  SvmParams sp;
  sp.seed = 3;
  const Vector ws = svm_train(pts, y, sp);
  EXPECT_EQ(labels_of(ws, pts), y);
  EXPECT_EQ(ws, svm_train(pts, y, sp));
}

AlumaConfig quick_aluma(int budget) {
  AlumaConfig cfg;
  cfg.budget = budget;
  cfg.samples_per_round = 200;
  cfg.sampler.mix_steps = 200;
  cfg.sampler.seed = 5;
  return cfg;
}

TEST(PipelineTest, SeparableFullBudget) {
  Rng rng(15);
  const Vector w = random_unit_vector(3, rng);
  const RowMatrix x = testing::planted_margin_pool(12, w, 0.3, rng);
  const auto y = labels_of(w, x);
  PreprocessParams p;
  p.gamma = 0.3;
  p.delta = 0.2;
  p.jl_dim = 60;
  const auto vec = pipeline_run(x, InputKind::kVectors, oracle_from_labels(y),
                                quick_aluma(12), p, {});
  EXPECT_EQ(vec.labeling, y);
  EXPECT_EQ(vec.projected.cols(), 60);
  EXPECT_EQ(labels_of(vec.w, x), y);
  const auto ker = pipeline_run(x * x.transpose(), InputKind::kKernel, oracle_from_labels(y),
                                quick_aluma(12), p, {});
  EXPECT_EQ(ker.labeling, y);
  EXPECT_EQ(ker.features.cols(), 12);
}

TEST(PipelineTest, NoisyLabelsBecomeSeparable) {
  const double gamma = 0.4;
  const OraclePool pool = gen_noisy_margin_pool(12, 2, gamma, 1.0 / 12, 3);
  ASSERT_FALSE(pool.realizable);
  PreprocessParams p;
  p.gamma = gamma;
  p.hinge_bound = pool.info.params["hinge"];
  p.delta = 0.1;
  p.seed = 2;
  PreprocessParams half = p;
  half.delta /= 2;
  const RowMatrix proj = preprocess_vectors(pool.pool.points, half);
  EXPECT_GE(best_margin(proj, pool.labels), gamma / (2 + 2 * std::sqrt(p.hinge_bound)));
  const auto out = pipeline_run(pool.pool.points, InputKind::kVectors, pool.oracle(),
                                quick_aluma(12), p, {});
  EXPECT_EQ(out.projected, proj);
  EXPECT_EQ(out.labeling, pool.labels);
}

}  // namespace
}  // namespace aluma
