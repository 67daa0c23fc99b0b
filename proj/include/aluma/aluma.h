#ifndef ALUMA_ALUMA_H_
#define ALUMA_ALUMA_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aluma/geometry.h"
#include "aluma/learner.h"
#include "aluma/sampling.h"

namespace aluma {

struct AlumaConfig {
  int budget = 0;
  double delta = 0.1;
  double lambda = 1e-3;
  int samples_per_round = 1000;
  // Pin k to samples_per_round instead of the concentration formula.
  bool cap_samples = true;
  SamplerConfig sampler;
  std::optional<int> vote_size;

  int vote_m() const;
  void validate(std::size_t pool_size) const;
};

struct SplitEstimate {
  std::size_t index = 0;
  double v_plus = 0.0;
  double v_minus = 0.0;

  double product() const { return v_plus * v_minus; }
};
using SplitEstimates = std::vector<SplitEstimate>;

// Hypotheses drawn per round for a pool of size m.
int round_sample_count(const AlumaConfig& cfg, std::size_t pool_size);

SplitEstimates estimates_from_batch(const HypothesisBatch& batch,
                                    std::span<const std::size_t> remaining,
                                    const RowMatrix& pool);

// Round t draws from V_t with seed mix64(cfg.sampler.seed, t).
SplitEstimates estimate_splits(const VersionSpace& vs,
                               std::span<const std::size_t> remaining,
                               const RowMatrix& pool, const AlumaConfig& cfg,
                               int round);

// 4 sqrt(lambda) + 2 lambda.
double balance_threshold(double lambda);
std::vector<bool> verify_balance(const SplitEstimates& est, double lambda);

// Pool index with the largest product; lowest index on ties.
std::size_t select_query(const SplitEstimates& est);

struct RoundView {
  int round;
  const VersionSpace& vs;
  std::span<const std::size_t> remaining;
  const SplitEstimates& estimates;
  std::size_t selected;
  bool balance_verified;
};
using RoundObserver = std::function<void(const RoundView&)>;

QueryLog run_aluma(const RowMatrix& pool, const LabelOracle& oracle,
                   const AlumaConfig& cfg, const RoundObserver& observer = {});

// One run, reporting the learner's output at every budget in `budgets`.
// cfg.budget is ignored; the largest budget plays the role of T.
std::vector<Checkpoint> trace_aluma(const RowMatrix& pool, const LabelOracle& oracle,
                                    const AlumaConfig& cfg,
                                    std::span<const int> budgets,
                                    const RoundObserver& observer = {},
                                    const CheckpointStop& stop_after = {});

struct RoundGap {
  int round = 0;
  double ratio = 1.0;
  bool balance_verified = false;
};

// Per round: exact P(V+)P(V-) of the selected point over the best candidate.
std::vector<RoundGap> greedy_gap_exact_2d(const RowMatrix& pool,
                                          const LabelOracle& oracle,
                                          const AlumaConfig& cfg);

}  // namespace aluma

#endif  // ALUMA_ALUMA_H_
