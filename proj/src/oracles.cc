#include "aluma/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "aluma/max_margin.h"
#include "aluma/rng.h"

namespace aluma {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Boundary angles closer than this are one boundary (x and -x, duplicates).
constexpr double kAngleMerge = 1e-12;
constexpr double kTieSlack = 1e-10;
constexpr std::size_t kMaxBrutePoints = 12;
constexpr std::size_t kMaxBrutePatterns = 4096;

using Ids = std::vector<std::uint32_t>;

void check_brute_size(const LabelingEnumeration& e) {
  if (e.pool_size > kMaxBrutePoints) {
    throw OracleLimitError("brute force needs m <= 12");
  }
  if (e.patterns.size() > kMaxBrutePatterns) {
    throw OracleLimitError("brute force needs at most 4096 patterns");
  }
}

Ids all_ids(const LabelingEnumeration& e) {
  Ids ids(e.patterns.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::uint32_t>(i);
  return ids;
}

double mass_of(const LabelingEnumeration& e, const Ids& ids) {
  double s = 0.0;
  for (auto id : ids) s += e.patterns[id].mass;
  return s;
}

// Returns false when point i does not split `ids`.
bool split(const LabelingEnumeration& e, const Ids& ids, std::size_t i, Ids& plus,
           Ids& minus) {
  plus.clear();
  minus.clear();
  for (auto id : ids) (e.patterns[id].labels[i] > 0 ? plus : minus).push_back(id);
  return !plus.empty() && !minus.empty();
}

LabelingEnumeration from_counts(std::size_t m, std::vector<std::vector<Label>> order,
                                const std::map<std::vector<Label>, double>& weight) {
  LabelingEnumeration out;
  out.pool_size = m;
  double total = 0.0;
  for (const auto& [_, w] : weight) total += w;
  if (!(total > 0.0)) throw std::invalid_argument("pattern weights must sum to > 0");
  for (auto& labels : order) {
    const double w = weight.at(labels);
    out.patterns.push_back({std::move(labels), w / total});
  }
  return out;
}

class OptMaxSolver {
 public:
  explicit OptMaxSolver(const LabelingEnumeration& e) : e_(e) {}

  int solve(const Ids& s) {
    if (s.size() <= 1) return 0;
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    const int lower = static_cast<int>(std::ceil(std::log2(static_cast<double>(s.size())) - 1e-12));
    int best = std::numeric_limits<int>::max();
    Ids plus, minus;
    for (std::size_t i = 0; i < e_.pool_size && best > lower; ++i) {
      if (!split(e_, s, i, plus, minus)) continue;
      // Larger side first: it usually decides the max and lets us cut early.
      Ids a = plus.size() >= minus.size() ? plus : minus;
      Ids b = plus.size() >= minus.size() ? minus : plus;
      const int da = solve(a);
      if (1 + da >= best) continue;
      const int db = solve(b);
      best = std::min(best, 1 + std::max(da, db));
    }
    memo_.emplace(s, best);
    return best;
  }

 private:
  const LabelingEnumeration& e_;
  std::map<Ids, int> memo_;
};

class OptFavgSolver {
 public:
  explicit OptFavgSolver(const LabelingEnumeration& e) : e_(e) {}

  // min over policies of sum_{h in s} P(h) P(V_k(h)).
  double solve(const Ids& s, int k) {
    const double p = mass_of(e_, s);
    if (k == 0 || s.size() <= 1) return p * p;
    auto key = std::make_pair(s, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double best = p * p;
    Ids plus, minus;
    for (std::size_t i = 0; i < e_.pool_size; ++i) {
      if (!split(e_, s, i, plus, minus)) continue;
      Ids a = plus, b = minus;
      best = std::min(best, solve(a, k - 1) + solve(b, k - 1));
    }
    memo_.emplace(std::move(key), best);
    return best;
  }

 private:
  const LabelingEnumeration& e_;
  std::map<std::pair<Ids, int>, double> memo_;
};

}  // namespace

double LabelingEnumeration::total_mass() const {
  double s = 0.0;
  for (const auto& p : patterns) s += p.mass;
  return s;
}

LabelingEnumeration enumerate_labelings_2d(const RowMatrix& points) {
  if (points.cols() != 2) throw std::invalid_argument("enumerate_labelings_2d: d must be 2");
  const std::size_t m = static_cast<std::size_t>(points.rows());
  if (m > 20) throw OracleLimitError("enumerate_labelings_2d: m <= 20");

  std::vector<double> cuts;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = points(i, 0), y = points(i, 1);
    if (x == 0.0 && y == 0.0) continue;  // always +1
    const double psi = std::atan2(y, x);
    cuts.push_back(normalize_angle(psi + std::numbers::pi / 2));
    cuts.push_back(normalize_angle(psi - std::numbers::pi / 2));
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> merged;
  for (double c : cuts) {
    if (merged.empty() || c - merged.back() > kAngleMerge) merged.push_back(c);
  }
  // The wrap-around sector joins the last and first cut.
  if (merged.size() > 1 && merged.front() + kTwoPi - merged.back() <= kAngleMerge) {
    merged.pop_back();
  }

  auto labels_at = [&](double theta) {
    const Vector w{{std::cos(theta), std::sin(theta)}};
    std::vector<Label> labels(m);
    for (std::size_t i = 0; i < m; ++i) labels[i] = sign_label(points.row(i).dot(w));
    return labels;
  };

  std::map<std::vector<Label>, double> weight;
  std::vector<std::vector<Label>> order;
  auto add = [&](std::vector<Label> labels, double width) {
    auto [it, fresh] = weight.emplace(labels, 0.0);
    it->second += width;
    if (fresh) order.push_back(std::move(labels));
  };
  if (merged.empty()) {
    add(labels_at(0.0), kTwoPi);
  } else {
    for (std::size_t j = 0; j < merged.size(); ++j) {
      const double lo = merged[j];
      const double hi = j + 1 < merged.size() ? merged[j + 1] : merged.front() + kTwoPi;
      add(labels_at((lo + hi) / 2), hi - lo);
    }
  }
  LabelingEnumeration out = from_counts(m, std::move(order), weight);
  out.exact = true;
  return out;
}

LabelingEnumeration enumerate_labelings_sampled(const RowMatrix& points, int samples,
                                                std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (points.cols() < 1) throw std::invalid_argument("points need a dimension");
  const std::size_t m = static_cast<std::size_t>(points.rows());
  Rng rng(seed);
  std::map<std::vector<Label>, double> weight;
  std::vector<std::vector<Label>> order;
  std::vector<Label> labels(m);
  for (int s = 0; s < samples; ++s) {
    const Vector w = random_unit_vector(static_cast<int>(points.cols()), rng);
    for (std::size_t i = 0; i < m; ++i) labels[i] = sign_label(points.row(i).dot(w));
    auto [it, fresh] = weight.emplace(labels, 0.0);
    it->second += 1.0;
    if (fresh) order.push_back(labels);
  }
  return from_counts(m, std::move(order), weight);
}

LabelingEnumeration enumeration_from_patterns(std::vector<std::vector<Label>> labelings,
                                              std::vector<double> weights) {
  if (labelings.empty()) throw std::invalid_argument("no patterns");
  if (!weights.empty() && weights.size() != labelings.size()) {
    throw std::invalid_argument("weights/patterns size mismatch");
  }
  const std::size_t m = labelings.front().size();
  std::map<std::vector<Label>, double> weight;
  std::vector<std::vector<Label>> order;
  for (std::size_t j = 0; j < labelings.size(); ++j) {
    if (labelings[j].size() != m) throw std::invalid_argument("patterns differ in length");
    for (Label y : labelings[j]) {
      if (y != 1 && y != -1) throw std::invalid_argument("label must be -1 or +1");
    }
    const double w = weights.empty() ? 1.0 : weights[j];
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be >= 0");
    auto [it, fresh] = weight.emplace(labelings[j], 0.0);
    it->second += w;
    if (fresh) order.push_back(labelings[j]);
  }
  return from_counts(m, std::move(order), weight);
}

int brute_force_opt_max(const LabelingEnumeration& e) {
  check_brute_size(e);
  if (e.patterns.empty()) throw std::invalid_argument("empty enumeration");
  OptMaxSolver solver(e);
  return solver.solve(all_ids(e));
}

QueryPolicy exact_greedy_policy() {
  return [](const LabelingEnumeration& e, std::span<const std::uint32_t> alive,
            const std::vector<bool>& queried) -> std::optional<std::size_t> {
    std::optional<std::size_t> pick;
    double best = 0.0;
    for (std::size_t i = 0; i < e.pool_size; ++i) {
      if (queried[i]) continue;
      double plus = 0.0, minus = 0.0;
      for (auto id : alive) {
        (e.patterns[id].labels[i] > 0 ? plus : minus) += e.patterns[id].mass;
      }
      // Masses are sums of sector widths, so exact ties can differ by an ulp.
      const double prod = plus * minus;
      if (prod > best * (1 + kTieSlack)) {
        best = prod;
        pick = i;
      }
    }
    return pick;
  };
}

QueryPolicy fixed_order_policy(std::vector<std::size_t> order) {
  return [order = std::move(order)](const LabelingEnumeration&,
                                    std::span<const std::uint32_t>,
                                    const std::vector<bool>& queried)
             -> std::optional<std::size_t> {
    for (std::size_t i : order) {
      if (i < queried.size() && !queried[i]) return i;
    }
    return std::nullopt;
  };
}

double version_space_mass_after(const QueryPolicy& policy, const LabelingEnumeration& e,
                                std::size_t h, int t) {
  if (h >= e.patterns.size()) throw std::out_of_range("pattern index");
  if (t < 0) throw std::invalid_argument("t must be >= 0");
  Ids alive = all_ids(e);
  std::vector<bool> queried(e.pool_size, false);
  const auto& truth = e.patterns[h].labels;
  for (int step = 0; step < t; ++step) {
    const auto q = policy(e, alive, queried);
    if (!q) break;
    if (*q >= e.pool_size || queried[*q]) throw std::logic_error("policy chose a bad index");
    queried[*q] = true;
    std::erase_if(alive, [&](std::uint32_t id) { return e.patterns[id].labels[*q] != truth[*q]; });
  }
  return mass_of(e, alive);
}

double compute_favg(const QueryPolicy& policy, const LabelingEnumeration& e, int t) {
  double s = 0.0;
  for (std::size_t h = 0; h < e.patterns.size(); ++h) {
    s += e.patterns[h].mass * version_space_mass_after(policy, e, h, t);
  }
  return 1.0 - s;
}

double optimal_favg(const LabelingEnumeration& e, int k) {
  check_brute_size(e);
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  OptFavgSolver solver(e);
  return 1.0 - solver.solve(all_ids(e), k);
}

double resolved_favg(const LabelingEnumeration& e) {
  double s = 0.0;
  for (const auto& p : e.patterns) s += p.mass * p.mass;
  return 1.0 - s;
}

double min_labeling_margin(const RowMatrix& points, const LabelingEnumeration& e) {
  if (e.pool_size != static_cast<std::size_t>(points.rows())) {
    throw std::invalid_argument("enumeration does not match the pool");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : e.patterns) {
    best = std::min(best, max_margin_normalized(signed_rows(points, p.labels)).lower);
  }
  return best;
}

}  // namespace aluma
