#ifndef ALUMA_ORACLES_H_
#define ALUMA_ORACLES_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aluma/geometry.h"

namespace aluma {

// Brute-force quantities on tiny pools. A pool's hypotheses are grouped by
// the labeling they induce; each group carries its prior mass.

struct LabelPattern {
  std::vector<Label> labels;
  double mass = 0.0;
};

struct LabelingEnumeration {
  std::size_t pool_size = 0;
  std::vector<LabelPattern> patterns;
  // Masses are exact arc fractions (d=2) rather than estimates.
  bool exact = false;

  double total_mass() const;
};

// Realizable labelings of a 2-D pool with exact angular masses. The boundary
// directions psi_i +- pi/2 cut the circle into at most 2m sectors; sectors
// with the same labeling are merged. m <= 20.
LabelingEnumeration enumerate_labelings_2d(const RowMatrix& points);

// Labelings hit by `samples` uniform directions, masses are hit frequencies.
// Any dimension; classes narrower than ~1/samples may be missed.
LabelingEnumeration enumerate_labelings_sampled(const RowMatrix& points, int samples,
                                                std::uint64_t seed);

// Explicit hypothesis class: distinct labelings with given (or uniform)
// weights, normalized to sum 1. Duplicate labelings are merged.
LabelingEnumeration enumeration_from_patterns(std::vector<std::vector<Label>> labelings,
                                              std::vector<double> weights = {});

class OracleLimitError : public std::invalid_argument {
 public:
  explicit OracleLimitError(const std::string& what) : std::invalid_argument(what) {}
};

// Minimax depth of the best query tree that identifies the labeling.
// Requires m <= 12 and at most 4096 patterns.
int brute_force_opt_max(const LabelingEnumeration& e);

// Next query from the ids of the patterns still consistent with the answers
// and the set of points queried so far; nullopt stops the run.
using QueryPolicy = std::function<std::optional<std::size_t>(
    const LabelingEnumeration&, std::span<const std::uint32_t> alive,
    const std::vector<bool>& queried)>;

// Largest P(V+) P(V-), lowest index on ties (relative slack 1e-10); stops
// once no point splits.
QueryPolicy exact_greedy_policy();
// Unqueried points in the given order, whether or not they split.
QueryPolicy fixed_order_policy(std::vector<std::size_t> order);

// Mass of the patterns consistent with the first t answers when the truth
// is pattern h.
double version_space_mass_after(const QueryPolicy& policy, const LabelingEnumeration& e,
                                std::size_t h, int t);

// 1 - sum_h P(h) P(V_t(policy, h)).
double compute_favg(const QueryPolicy& policy, const LabelingEnumeration& e, int t);

// Best f_avg any deterministic policy reaches with k queries.
double optimal_favg(const LabelingEnumeration& e, int k);

// 1 - sum_h P(h)^2, the value once every labeling is pinned down.
double resolved_favg(const LabelingEnumeration& e);

// Smallest max-margin over the enumerated labelings (raw points, unit w).
double min_labeling_margin(const RowMatrix& points, const LabelingEnumeration& e);

}  // namespace aluma

#endif  // ALUMA_ORACLES_H_
