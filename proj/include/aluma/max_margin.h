#ifndef ALUMA_MAX_MARGIN_H_
#define ALUMA_MAX_MARGIN_H_

#include "aluma/geometry.h"

namespace aluma {

struct MaxMarginResult {
  // Unit direction attaining `lower`, or zero when no positive margin exists.
  Vector w;
  // min_i <w, a_i> for the returned w (certified achievable).
  double lower = 0.0;
  // Norm of a point in conv{a_i}; no unit w does better than this.
  double upper = 0.0;
  int iterations = 0;
};

// max_{|w| <= 1} min_i <w, a_i> over the rows of `rows`, via the minimum-norm
// point of their convex hull (Wolfe's active-set method).
MaxMarginResult max_margin(const RowMatrix& rows, int max_iterations = 10000);

// Same, with every row scaled to unit norm first (zero rows rejected).
MaxMarginResult max_margin_normalized(const RowMatrix& rows,
                                      int max_iterations = 10000);

// Rows y_i x_i for a labeled pool.
RowMatrix signed_rows(const RowMatrix& points, std::span<const Label> labels);

}  // namespace aluma

#endif  // ALUMA_MAX_MARGIN_H_
