#include "aluma/max_margin.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aluma {

namespace {

// Minimum-norm point of the affine hull of rows[s]; returns barycentric weights.
Eigen::VectorXd affine_min_norm(const RowMatrix& rows, const std::vector<int>& s) {
  const int k = static_cast<int>(s.size());
  Eigen::VectorXd mu(k);
  if (k == 1) {
    mu[0] = 1.0;
    return mu;
  }
  const Eigen::VectorXd p0 = rows.row(s[0]).transpose();
  Eigen::MatrixXd d(rows.cols(), k - 1);
  for (int i = 1; i < k; ++i) d.col(i - 1) = rows.row(s[i]).transpose() - p0;
  const Eigen::VectorXd beta = d.colPivHouseholderQr().solve(-p0);
  mu[0] = 1.0 - beta.sum();
  mu.tail(k - 1) = beta;
  return mu;
}

Eigen::VectorXd combine(const RowMatrix& rows, const std::vector<int>& s,
                        const Eigen::VectorXd& lambda) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(rows.cols());
  for (std::size_t i = 0; i < s.size(); ++i) x += lambda[i] * rows.row(s[i]).transpose();
  return x;
}

}  // namespace

MaxMarginResult max_margin(const RowMatrix& rows, int max_iterations) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index dim = rows.cols();
  if (n == 0) throw std::invalid_argument("max_margin: no rows");

  MaxMarginResult res;
  res.w = Vector::Zero(dim);
  const Eigen::VectorXd norms2 = rows.rowwise().squaredNorm();
  const double scale = norms2.maxCoeff();
  if (!(scale > 0.0)) return res;
  const double tol = 1e-12 * scale;
  constexpr double kWeightEps = 1e-14;

  Eigen::Index start = 0;
  norms2.minCoeff(&start);
  std::vector<int> s = {static_cast<int>(start)};
  Eigen::VectorXd lambda = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd x = rows.row(start).transpose();

  int it = 0;
  for (; it < max_iterations; ++it) {
    const double xx = x.squaredNorm();
    if (xx <= 1e-30 * scale) break;
    const Eigen::VectorXd dots = rows * x;
    Eigen::Index j = 0;
    const double best = dots.minCoeff(&j);
    if (xx - best <= tol) break;
    if (std::find(s.begin(), s.end(), static_cast<int>(j)) != s.end()) break;
    s.push_back(static_cast<int>(j));
    lambda.conservativeResize(lambda.size() + 1);
    lambda[lambda.size() - 1] = 0.0;

    for (int minor = 0; minor <= static_cast<int>(dim) + 2; ++minor) {
      const Eigen::VectorXd mu = affine_min_norm(rows, s);
      if ((mu.array() > kWeightEps).all()) {
        lambda = mu;
        break;
      }
      double theta = 1.0;
      int drop = -1;
      for (int i = 0; i < mu.size(); ++i) {
        if (mu[i] <= kWeightEps) {
          const double denom = lambda[i] - mu[i];
          const double t = denom > 0.0 ? lambda[i] / denom : 0.0;
          if (drop < 0 || t < theta) {
            theta = t;
            drop = i;
          }
        }
      }
      lambda = (1.0 - theta) * lambda + theta * mu;
      lambda[drop] = 0.0;
      std::vector<int> keep_s;
      std::vector<double> keep_l;
      for (int i = 0; i < lambda.size(); ++i) {
        if (lambda[i] > kWeightEps) {
          keep_s.push_back(s[i]);
          keep_l.push_back(lambda[i]);
        }
      }
      s = keep_s;
      lambda = Eigen::Map<Eigen::VectorXd>(keep_l.data(), keep_l.size());
      lambda /= lambda.sum();
    }
    x = combine(rows, s, lambda);
  }
  res.iterations = it;
  res.upper = x.norm();
  if (res.upper > 0.0) {
    const Vector w = x / res.upper;
    const double achieved = (rows * w).minCoeff();
    if (achieved > 0.0) {
      res.w = w;
      res.lower = achieved;
    }
  }
  res.upper = std::max(res.upper, res.lower);
  return res;
}

MaxMarginResult max_margin_normalized(const RowMatrix& rows, int max_iterations) {
  RowMatrix unit = rows;
  for (Eigen::Index i = 0; i < unit.rows(); ++i) {
    const double nrm = unit.row(i).norm();
    if (!(nrm > 0.0)) throw std::invalid_argument("max_margin_normalized: zero row");
    unit.row(i) /= nrm;
  }
  return max_margin(unit, max_iterations);
}

RowMatrix signed_rows(const RowMatrix& points, std::span<const Label> labels) {
  if (static_cast<std::size_t>(points.rows()) != labels.size()) {
    throw std::invalid_argument("signed_rows: size mismatch");
  }
  RowMatrix out = points;
  for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i) *= labels[i];
  return out;
}

}  // namespace aluma
