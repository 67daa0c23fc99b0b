#ifndef ALUMA_BASELINES_H_
#define ALUMA_BASELINES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aluma/geometry.h"
#include "aluma/learner.h"
#include "aluma/sampling.h"

namespace aluma {

// +1 if (x, -1) would empty the version space at slack eps_feas, -1
// symmetrically, nullopt when both labels remain feasible.
std::optional<Label> label_determined(const VersionSpace& vs, const Vector& x,
                                      double eps_feas = 1e-9);

// Seeded uniform permutation of [0, m).
std::vector<std::size_t> stream_order(std::size_t m, std::uint64_t seed);

struct BaselineConfig {
  int budget = 0;
  // mix_steps and seed for every hit-and-run draw (committees and votes).
  SamplerConfig sampler;
  int vote_size = 216;  // ceil(72 ln 20)
  double eps_feas = 1e-9;
  int committee = 2;
  // QBC only: passes over the stream order (already-queried points skipped).
  int qbc_passes = 1;
};

// The majority vote for a run with q queries uses seed mix64(vote seed, q),
// so traced checkpoints equal standalone runs.
QueryLog run_cal(const RowMatrix& pool, const LabelOracle& oracle,
                 std::span<const std::size_t> order, const BaselineConfig& cfg);
std::vector<Checkpoint> trace_cal(const RowMatrix& pool, const LabelOracle& oracle,
                                  std::span<const std::size_t> order,
                                  const BaselineConfig& cfg,
                                  std::span<const int> budgets,
                                  const CheckpointStop& stop_after = {});

QueryLog run_qbc(const RowMatrix& pool, const LabelOracle& oracle,
                 std::span<const std::size_t> order, const BaselineConfig& cfg);
std::vector<Checkpoint> trace_qbc(const RowMatrix& pool, const LabelOracle& oracle,
                                  std::span<const std::size_t> order,
                                  const BaselineConfig& cfg,
                                  std::span<const int> budgets,
                                  const CheckpointStop& stop_after = {});

QueryLog run_tk(const RowMatrix& pool, const LabelOracle& oracle,
                const BaselineConfig& cfg);
std::vector<Checkpoint> trace_tk(const RowMatrix& pool, const LabelOracle& oracle,
                                 const BaselineConfig& cfg,
                                 std::span<const int> budgets,
                                 const CheckpointStop& stop_after = {});

// Queries the first `budget` indices of a seeded shuffle.
QueryLog run_passive_erm(const RowMatrix& pool, const LabelOracle& oracle,
                         const BaselineConfig& cfg);
std::vector<Checkpoint> trace_passive_erm(const RowMatrix& pool,
                                          const LabelOracle& oracle,
                                          const BaselineConfig& cfg,
                                          std::span<const int> budgets,
                                          const CheckpointStop& stop_after = {});

}  // namespace aluma

#endif  // ALUMA_BASELINES_H_
