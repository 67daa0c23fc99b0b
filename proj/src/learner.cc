#include "aluma/learner.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aluma {

LabelOracle oracle_from_labels(std::vector<Label> labels) {
  return [labels = std::move(labels)](std::size_t i) -> Label {
    if (i >= labels.size()) throw std::out_of_range("oracle index out of range");
    return labels[i];
  };
}

int default_vote_size(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  return static_cast<int>(std::ceil(72.0 * std::log(2.0 / delta)));
}

std::vector<int> normalize_budgets(std::span<const int> budgets) {
  if (budgets.empty()) throw std::invalid_argument("empty budget list");
  std::vector<int> out(budgets.begin(), budgets.end());
  for (int b : out) {
    if (b < 0) throw std::invalid_argument("budgets must be non-negative");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VersionSpace version_space_from(const RowMatrix& points,
                                const std::vector<QueryRecord>& records) {
  VersionSpace vs(static_cast<int>(points.cols()));
  for (const auto& r : records) {
    vs = vs.with_constraint(points.row(static_cast<Eigen::Index>(r.index)).transpose(),
                            r.label);
  }
  return vs;
}

}  // namespace aluma
