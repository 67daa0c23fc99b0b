#ifndef ALUMA_TESTS_TEST_UTIL_H_
#define ALUMA_TESTS_TEST_UTIL_H_

#include <cmath>
#include <numbers>
#include <vector>

#include "aluma/geometry.h"
#include "aluma/rng.h"

namespace aluma::testing {

inline Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

inline Vector unit2(double angle) { return v2(std::cos(angle), std::sin(angle)); }

inline std::vector<Label> labels_of(const Vector& w, const RowMatrix& pool) {
  std::vector<Label> y(static_cast<std::size_t>(pool.rows()));
  for (Eigen::Index i = 0; i < pool.rows(); ++i) y[i] = sign_label(pool.row(i).dot(w));
  return y;
}

// Unit points with |<w, x>| >= gamma for a planted unit w.
inline RowMatrix planted_margin_pool(int m, const Vector& w, double gamma, Rng& rng) {
  RowMatrix pool(m, w.size());
  for (int i = 0; i < m;) {
    const Vector x = random_unit_vector(static_cast<int>(w.size()), rng);
    if (std::abs(x.dot(w)) < gamma) continue;
    pool.row(i++) = x.transpose();
  }
  return pool;
}

inline RowMatrix random_unit_pool(int m, int d, Rng& rng) {
  RowMatrix pool(m, d);
  for (int i = 0; i < m; ++i) pool.row(i) = random_unit_vector(d, rng).transpose();
  return pool;
}

}  // namespace aluma::testing

#endif  // ALUMA_TESTS_TEST_UTIL_H_
