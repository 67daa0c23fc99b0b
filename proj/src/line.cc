#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aluma/line.h"

namespace aluma {

namespace {

// Thresholds consistent with the answers so far: c in (lo, hi], or [0, hi]
// before any negative answer.
struct ThresholdInterval {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_closed = true;

  bool uncertain(double x) const { return x < hi && (x > lo || (lo_closed && x == lo)); }
  double split(double x) const { return (x - lo) * (hi - x); }

  void update(double x, Label y) {
    if (y == 1) {
      hi = std::min(hi, x);
    } else if (x >= lo) {
      lo = x;
      lo_closed = false;
    }
  }
};

void check_pool(const LinePool& pool) {
  if (pool.points.empty()) throw std::invalid_argument("empty line pool");
  if (!std::is_sorted(pool.points.begin(), pool.points.end())) {
    throw std::invalid_argument("line pool must be sorted");
  }
}

Label ask(const LinePool& pool, std::size_t i, ThresholdInterval& iv, LineRun& run) {
  const Label y = pool.label(i);
  run.queried.push_back(i);
  iv.update(pool.points[i], y);
  return y;
}

// Labels implied by the interval; undetermined points get +1 iff above lo.
std::vector<Label> labels_from(const LinePool& pool, const ThresholdInterval& iv) {
  std::vector<Label> y(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double x = pool.points[i];
    y[i] = x >= iv.hi || (x > iv.lo && !(iv.lo_closed && x == iv.lo)) ? 1 : -1;
  }
  return y;
}

}  // namespace

double line_class_width(const LinePool& pool) {
  double below = 0.0;
  double above = 1.0;
  for (double x : pool.points) {
    if (x < pool.threshold) below = std::max(below, x);
    if (x >= pool.threshold) above = std::min(above, x);
  }
  return above - below;
}

LineRun binary_search_line(const LinePool& pool, int budget) {
  check_pool(pool);
  // Distinct uncertain values, keeping the first index of each.
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool.points[i] >= 1.0) continue;
    if (idx.empty() || pool.points[idx.back()] != pool.points[i]) idx.push_back(i);
  }
  LineRun run;
  ThresholdInterval iv;
  // First positive among idx lies in [lo, hi]; hi == size means none.
  std::size_t lo = 0;
  std::size_t hi = idx.size();
  while (lo < hi && (budget < 0 || run.queries() < budget)) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ask(pool, idx[mid], iv, run) == 1) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  run.labeling = labels_from(pool, iv);
  return run;
}

LineRun alpha_greedy_smallest_x_line(const LinePool& pool, double alpha, int budget) {
  check_pool(pool);
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
  LineRun run;
  ThresholdInterval iv;
  while (budget < 0 || run.queries() < budget) {
    double best = -1.0;
    for (double x : pool.points) {
      if (iv.uncertain(x)) best = std::max(best, iv.split(x));
    }
    if (best < 0.0) break;
    // Slack of a few ulps of the product, so a point computed to meet the
    // bound with equality still counts.
    const double need =
        best / alpha * (1.0 - 1e-12) - 8.0 * std::numeric_limits<double>::epsilon() * (iv.hi - iv.lo);
    std::size_t pick = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (iv.uncertain(pool.points[i]) && iv.split(pool.points[i]) >= need) {
        pick = i;
        break;
      }
    }
    ask(pool, pick, iv, run);
  }
  run.labeling = labels_from(pool, iv);
  return run;
}

LineRun exact_greedy_line(const LinePool& pool, int budget) {
  return alpha_greedy_smallest_x_line(pool, 1.0, budget);
}

}  // namespace aluma
