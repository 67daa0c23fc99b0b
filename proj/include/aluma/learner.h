#ifndef ALUMA_LEARNER_H_
#define ALUMA_LEARNER_H_

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "aluma/geometry.h"
#include "aluma/sampling.h"

namespace aluma {

using LabelOracle = std::function<Label(std::size_t)>;

// Oracle reading from a fixed label vector.
LabelOracle oracle_from_labels(std::vector<Label> labels);

struct QueryRecord {
  int round = 0;  // 1-based
  std::size_t index = 0;
  Label label = 1;
  double v_plus = std::numeric_limits<double>::quiet_NaN();
  double v_minus = std::numeric_limits<double>::quiet_NaN();
  bool balance_verified = false;
};

struct QueryLog {
  std::vector<QueryRecord> records;
  // Final output labeling of every pool point.
  std::vector<Label> labeling;

  std::size_t queries() const { return records.size(); }
};

// State of a learner after spending (at most) `budget` labels.
struct Checkpoint {
  int budget = 0;
  QueryLog log;
  // Hypotheses drawn from the final version space; labels held-out points.
  HypothesisBatch vote;
  double elapsed_ms = 0.0;
};

// Called on each emitted checkpoint; returning true ends the trace there and
// larger budgets are left out. Lets a sweep stop once the error is zero.
using CheckpointStop = std::function<bool(const Checkpoint&)>;

// ceil(72 ln(2 / delta)).
int default_vote_size(double delta);

// Budgets must be non-negative; returns them sorted and deduplicated.
std::vector<int> normalize_budgets(std::span<const int> budgets);

VersionSpace version_space_from(const RowMatrix& points,
                                const std::vector<QueryRecord>& records);

}  // namespace aluma

#endif  // ALUMA_LEARNER_H_
