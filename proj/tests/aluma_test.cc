#include "aluma/aluma.h"

#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "test_util.h"

namespace aluma {
namespace {

using testing::labels_of;
using testing::unit2;
using testing::v2;

TEST(VerifyBalanceTest, Examples) {
  EXPECT_NEAR(balance_threshold(0.01), 0.42, 1e-15);
  EXPECT_NEAR(balance_threshold(1e-4), 0.0402, 1e-15);
  const SplitEstimates half = {{0, 0.5, 0.5}};
  EXPECT_FALSE(verify_balance(half, 0.01)[0]);
  EXPECT_TRUE(verify_balance(half, 1e-4)[0]);
  const SplitEstimates pure = {{0, 1.0, 0.0}};
  EXPECT_FALSE(verify_balance(pure, 1e-12)[0]);
}

TEST(SelectQueryTest, Examples) {
  EXPECT_EQ(select_query({{3, 0.5, 0.5}, {7, 0.9, 0.1}}), 3u);
  EXPECT_EQ(select_query({{4, 0.9, 0.1}, {2, 0.1, 0.9}, {9, 0.9, 0.1}}), 2u);
  EXPECT_EQ(select_query({{5, 1.0, 0.0}}), 5u);
  EXPECT_THROW(select_query({}), std::invalid_argument);
}

TEST(RoundSampleCountTest, CapAndFormula) {
  AlumaConfig cfg;
  cfg.samples_per_round = 1000;
  EXPECT_EQ(round_sample_count(cfg, 100), 1000);
  cfg.cap_samples = false;
  cfg.budget = 10;
  cfg.delta = 0.1;
  cfg.lambda = 1.0 / 64;
  // ln(2 * 10 * 100 / 0.05) * 2048 = 21701.9...
  EXPECT_EQ(round_sample_count(cfg, 100), 21702);
  cfg.samples_per_round = 50000;
  EXPECT_EQ(round_sample_count(cfg, 100), 50000);
}

TEST(AlumaConfigTest, Validation) {
  AlumaConfig cfg;
  cfg.budget = 5;
  EXPECT_NO_THROW(cfg.validate(5));
  EXPECT_THROW(cfg.validate(4), std::invalid_argument);
  cfg.lambda = 1.0 / 60;
  EXPECT_THROW(cfg.validate(5), std::invalid_argument);
  cfg.lambda = 1.0 / 64;
  EXPECT_NO_THROW(cfg.validate(5));
  cfg.delta = 1.0;
  EXPECT_THROW(cfg.validate(5), std::invalid_argument);
  EXPECT_EQ(default_vote_size(0.01), 382);
  EXPECT_EQ(default_vote_size(0.1), 216);
}

TEST(EstimateSplitsTest, BallHalvesAnyPoint) {
  AlumaConfig cfg;
  cfg.sampler.seed = 4;
  RowMatrix pool(1, 2);
  pool << 1, 0;
  const std::vector<std::size_t> rem = {0};
  const SplitEstimates est = estimate_splits(VersionSpace(2), rem, pool, cfg, 1);
  ASSERT_EQ(est.size(), 1u);
  EXPECT_GE(est[0].v_plus, 0.45);
  EXPECT_LE(est[0].v_plus, 0.55);
  EXPECT_DOUBLE_EQ(est[0].v_plus + est[0].v_minus, 1.0);
}

TEST(EstimateSplitsTest, CountingAndDuplicates) {
  HypothesisBatch b;
  b.w.resize(4, 2);
  b.w << 0.5, 0.1, 0.2, -0.3, 0.9, 0.0, 0.1, 0.1;
  RowMatrix pool(3, 2);
  pool << 1, 0, 0, 1, 1, 0;
  const std::vector<std::size_t> rem = {0, 1, 2};
  const SplitEstimates est = estimates_from_batch(b, rem, pool);
  EXPECT_EQ(est[0].v_plus, 1.0);
  EXPECT_EQ(est[0].v_minus, 0.0);
  EXPECT_EQ(est[1].v_plus, 0.75);  // (0.9, 0) counts as positive
  EXPECT_EQ(est[0].v_plus, est[2].v_plus);
  EXPECT_EQ(est[0].v_minus, est[2].v_minus);
}

AlumaConfig small_config(std::uint64_t seed) {
  AlumaConfig cfg;
  cfg.samples_per_round = 300;
  cfg.sampler.mix_steps = 100;
  cfg.sampler.seed = seed;
  return cfg;
}

TEST(RunAlumaTest, FullBudgetRecoversPlantedLabels) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector wstar = random_unit_vector(2, rng);
    const RowMatrix pool = testing::random_unit_pool(8, 2, rng);
    const std::vector<Label> y = labels_of(wstar, pool);
    AlumaConfig cfg = small_config(trial);
    cfg.budget = 8;
    std::set<std::size_t> seen;
    auto observer = [&](const RoundView& v) {
      EXPECT_TRUE(v.vs.contains(0.999 * wstar));
      EXPECT_TRUE(seen.insert(v.selected).second);
    };
    const QueryLog log = run_aluma(pool, oracle_from_labels(y), cfg, observer);
    EXPECT_EQ(log.labeling, y);
    EXPECT_LE(log.queries(), 8u);
    for (const auto& r : log.records) EXPECT_EQ(log.labeling[r.index], r.label);
  }
}

TEST(RunAlumaTest, PropertiesInHigherDimension) {
  Rng rng(32);
  const Vector wstar = random_unit_vector(5, rng);
  const RowMatrix pool = testing::random_unit_pool(60, 5, rng);
  const std::vector<Label> y = labels_of(wstar, pool);
  AlumaConfig cfg = small_config(2);
  cfg.budget = 25;
  const QueryLog log = run_aluma(pool, oracle_from_labels(y), cfg);
  EXPECT_LE(log.queries(), 25u);
  std::set<std::size_t> seen;
  VersionSpace vs(5);
  for (const auto& r : log.records) {
    EXPECT_TRUE(seen.insert(r.index).second);
    EXPECT_EQ(r.label, y[r.index]);
    EXPECT_EQ(log.labeling[r.index], r.label);
    vs = vs.with_constraint(pool.row(r.index).transpose(), r.label);
    EXPECT_TRUE(vs.contains(0.999 * wstar));
  }
}

TEST(RunAlumaTest, ZeroBudgetIsBallVote) {
  RowMatrix pool(3, 2);
  pool << 1, 0, 0, 1, -1, 1;
  AlumaConfig cfg = small_config(1);
  const QueryLog log = run_aluma(pool, oracle_from_labels({1, 1, 1}), cfg);
  EXPECT_EQ(log.queries(), 0u);
  EXPECT_EQ(log.labeling.size(), 3u);
}

TEST(RunAlumaTest, StopsEarlyWhenNothingIsUncertain) {
  // The second point is implied by the first; querying it is pointless.
  RowMatrix pool(2, 2);
  pool << 1, 0, 2, 0;
  AlumaConfig cfg = small_config(1);
  cfg.budget = 2;
  const QueryLog log = run_aluma(pool, oracle_from_labels({1, 1}), cfg);
  EXPECT_EQ(log.queries(), 1u);
  EXPECT_EQ(log.labeling, (std::vector<Label>{1, 1}));
}

TEST(TraceAlumaTest, MatchesStandaloneRuns) {
  Rng rng(33);
  const Vector wstar = random_unit_vector(3, rng);
  const RowMatrix pool = testing::random_unit_pool(30, 3, rng);
  const std::vector<Label> y = labels_of(wstar, pool);
  const AlumaConfig cfg = small_config(8);
  const std::vector<int> budgets = {0, 3, 6};
  const auto trace = trace_aluma(pool, oracle_from_labels(y), cfg, budgets);
  ASSERT_EQ(trace.size(), 3u);
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    AlumaConfig one = cfg;
    one.budget = budgets[i];
    const QueryLog log = run_aluma(pool, oracle_from_labels(y), one);
    EXPECT_EQ(trace[i].budget, budgets[i]);
    EXPECT_EQ(trace[i].log.labeling, log.labeling);
    EXPECT_EQ(trace[i].log.queries(), log.queries());
    EXPECT_EQ(trace[i].vote.size(), static_cast<std::size_t>(cfg.vote_m()));
  }
}

TEST(GreedyGapTest, Examples) {
  RowMatrix one(1, 2);
  one << 0.3, 0.4;
  AlumaConfig cfg = small_config(3);
  cfg.budget = 1;
  auto gaps = greedy_gap_exact_2d(one, oracle_from_labels({1}), cfg);
  ASSERT_EQ(gaps.size(), 1u);
  EXPECT_DOUBLE_EQ(gaps[0].ratio, 1.0);

  RowMatrix two(2, 2);
  two.row(0) = unit2(0).transpose();
  two.row(1) = unit2(std::numbers::pi / 180).transpose();
  gaps = greedy_gap_exact_2d(two, oracle_from_labels({1, 1}), cfg);
  ASSERT_EQ(gaps.size(), 1u);
  EXPECT_NEAR(gaps[0].ratio, 1.0, 1e-12);
  EXPECT_THROW(greedy_gap_exact_2d(RowMatrix::Ones(1, 3), oracle_from_labels({1}), cfg),
               std::invalid_argument);
}

// Rounds whose balance check passes are 2-approximately greedy.
TEST(GreedyGapTest, VerifiedRoundsAreTwoApproximate) {
  Rng rng(34);
  int verified = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Vector wstar = random_unit_vector(2, rng);
    const RowMatrix pool = testing::random_unit_pool(8, 2, rng);
    AlumaConfig cfg;
    cfg.budget = 8;
    cfg.lambda = 1e-4;
    cfg.samples_per_round = 20000;
    cfg.sampler.mix_steps = 20;
    cfg.sampler.seed = trial;
    for (const RoundGap& g :
         greedy_gap_exact_2d(pool, oracle_from_labels(labels_of(wstar, pool)), cfg)) {
      if (!g.balance_verified) continue;
      ++verified;
      EXPECT_GE(g.ratio, 0.5);
    }
  }
  EXPECT_GT(verified, 10);
}

// After the budget, the target's class holds at least 2/3 of the version space.
TEST(RunAlumaTest, PurityEndgame) {
  Rng rng(35);
  const double gamma = 0.2;
  const int m = 24;
  const double p_hat = (gamma / 2) * (gamma / 2);
  const int t_formula = static_cast<int>(
      std::ceil(4 * (2 * std::log(1 / p_hat) + std::log(2.0)) * std::ceil(std::log2(m))));
  int good = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vector wstar = random_unit_vector(2, rng);
    const RowMatrix pool = testing::planted_margin_pool(m, wstar, gamma, rng);
    const std::vector<Label> y = labels_of(wstar, pool);
    AlumaConfig cfg;
    cfg.budget = std::min(t_formula, m);
    cfg.samples_per_round = 200;
    cfg.sampler.mix_steps = 50;
    cfg.sampler.seed = trial;
    const QueryLog log = run_aluma(pool, oracle_from_labels(y), cfg);
    const VersionSpace vs = version_space_from(pool, log.records);
    VersionSpace cls = vs;
    for (int i = 0; i < m; ++i) cls = cls.with_constraint(pool.row(i).transpose(), y[i]);
    good += arc_measure_2d(cls) / arc_measure_2d(vs) >= 2.0 / 3.0;
  }
  EXPECT_GE(good, 90);
}

}  // namespace
}  // namespace aluma
