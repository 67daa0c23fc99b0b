#ifndef ALUMA_LINE_H_
#define ALUMA_LINE_H_

#include <cstddef>
#include <vector>

#include "aluma/geometry.h"

namespace aluma {

// Points on [0,1] with hidden threshold c: label(x) = +1 iff x >= c.
struct LinePool {
  std::vector<double> points;  // sorted ascending
  double threshold = 0.5;

  std::size_t size() const { return points.size(); }
  Label label(std::size_t i) const { return points[i] >= threshold ? 1 : -1; }
  std::vector<Label> labels() const;
};

// Width of the target's equivalence class: the gap between the pool points
// enclosing the threshold (0 and 1 bound the ends). This is the margin of a
// threshold under the uniform prior on c.
double line_class_width(const LinePool& pool);

struct LineRun {
  std::vector<Label> labeling;
  // Pool indices in query order.
  std::vector<std::size_t> queried;

  int queries() const { return static_cast<int>(queried.size()); }
};

// Bisection over the distinct points whose label is not forced (x < 1).
// Budget cutoffs label like alpha_greedy_smallest_x_line below.
LineRun binary_search_line(const LinePool& pool, int budget = -1);

// Queries the point splitting the current threshold interval [a, b] most
// evenly, i.e. maximal (x - a)(b - x), smallest x on ties, until every label
// is determined.
LineRun exact_greedy_line(const LinePool& pool, int budget = -1);

// Queries the smallest x whose split (x - a)(b - x) is within a factor alpha
// of the best one. When `budget` runs out, points above a are labeled +1.
// budget < 0 means unlimited.
LineRun alpha_greedy_smallest_x_line(const LinePool& pool, double alpha,
                                     int budget = -1);

}  // namespace aluma

#endif  // ALUMA_LINE_H_
