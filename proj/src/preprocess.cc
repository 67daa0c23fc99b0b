#include "aluma/preprocess.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aluma/rng.h"

namespace aluma {

namespace {

constexpr double kNormSlack = 1e-12;
constexpr Eigen::Index kSignBlock = 256;

void check_labels(const RowMatrix& points, std::span<const Label> labels) {
  if (static_cast<std::size_t>(points.rows()) != labels.size()) {
    throw std::invalid_argument("labels/points size mismatch");
  }
  for (Label y : labels) {
    if (y != 1 && y != -1) throw std::invalid_argument("label must be -1 or +1");
  }
}

}  // namespace

void PreprocessParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(hinge_bound >= 0.0)) throw std::invalid_argument("hinge bound must be >= 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (jl_dim && *jl_dim < 1) throw std::invalid_argument("jl_dim must be >= 1");
  if (!(jl_constant > 0.0)) throw std::invalid_argument("jl constant must be positive");
}

int default_jl_dim(std::size_t m, const PreprocessParams& params) {
  params.validate();
  if (m == 0) throw std::invalid_argument("empty pool");
  const double k = params.jl_constant * (params.hinge_bound + 1.0) *
                   std::log(static_cast<double>(m) / params.delta) /
                   (params.gamma * params.gamma);
  if (!(k < 1e9)) throw std::invalid_argument("projection dimension too large");
  return std::max(1, static_cast<int>(std::ceil(k)));
}

RowMatrix kernel_decompose(const RowMatrix& kernel) {
  const Eigen::Index m = kernel.rows();
  if (m == 0 || kernel.cols() != m) throw std::invalid_argument("kernel must be square");
  if (!kernel.allFinite()) throw std::invalid_argument("kernel has non-finite entries");
  const double scale = std::max(1.0, kernel.cwiseAbs().maxCoeff());
  if ((kernel - kernel.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("kernel is not symmetric");
  }
  const Eigen::MatrixXd sym = 0.5 * (kernel + kernel.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -1e-8 * scale) {
    throw std::invalid_argument("kernel is not positive semidefinite");
  }
  const Eigen::VectorXd root = lambda.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

double lift_scale(double hinge_bound) {
  if (!(hinge_bound >= 0.0)) throw std::invalid_argument("hinge bound must be >= 0");
  return std::sqrt(1.0 / (1.0 + std::sqrt(hinge_bound)));
}

RowMatrix lift(const RowMatrix& points, double hinge_bound) {
  const double a = lift_scale(hinge_bound);
  const double b = std::sqrt(1.0 - a * a);
  const Eigen::Index m = points.rows();
  const Eigen::Index d = points.cols();
  if ((points.rowwise().norm().array() > 1.0 + kNormSlack).any()) {
    throw std::invalid_argument("lift: points must lie in the unit ball");
  }
  RowMatrix out = RowMatrix::Zero(m, d + m);
  out.leftCols(d) = a * points;
  for (Eigen::Index i = 0; i < m; ++i) out(i, d + i) = b;
  return out;
}

RowMatrix jl_project(const RowMatrix& points, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("jl_project: k must be >= 1");
  const Eigen::Index dim = points.cols();
  RowMatrix out(points.rows(), k);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  Eigen::MatrixXd signs(dim, kSignBlock);
  for (Eigen::Index r0 = 0; r0 < k; r0 += kSignBlock) {
    const Eigen::Index rows = std::min<Eigen::Index>(kSignBlock, k - r0);
    for (Eigen::Index r = 0; r < rows; ++r) {
      Rng rng(mix64(seed, static_cast<std::uint64_t>(r0 + r)));
      std::uint64_t bits = 0;
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (j % 64 == 0) bits = rng();
        signs(j, r) = (bits >> (j % 64)) & 1U ? scale : -scale;
      }
    }
    out.middleCols(r0, rows).noalias() = points * signs.leftCols(rows);
  }
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double n = out.row(i).norm();
    if (n > 1.0) out.row(i) /= n;
  }
  return out;
}

RowMatrix preprocess_vectors(const RowMatrix& points, const PreprocessParams& params) {
  params.validate();
  if (points.rows() == 0) throw std::invalid_argument("empty pool");
  const RowMatrix lifted = lift(points, params.hinge_bound);
  if (params.bypass_projection) return lifted;
  const int k = params.jl_dim.value_or(
      default_jl_dim(static_cast<std::size_t>(points.rows()), params));
  return jl_project(lifted, k, params.seed);
}

RowMatrix preprocess_kernel(const RowMatrix& kernel, const PreprocessParams& params) {
  return preprocess_vectors(kernel_decompose(kernel), params);
}

double total_hinge(const Vector& w, double gamma, const RowMatrix& points,
                   std::span<const Label> labels) {
  check_labels(points, labels);
  if (w.size() != points.cols()) throw std::invalid_argument("dimension mismatch");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double l = std::max(0.0, gamma - labels[i] * points.row(i).dot(w));
    sum += l * l;
  }
  return sum;
}

Vector lifted_witness(const Vector& w, double gamma, const RowMatrix& points,
                      std::span<const Label> labels, double hinge_bound) {
  check_labels(points, labels);
  if (w.size() != points.cols()) throw std::invalid_argument("dimension mismatch");
  if (w.norm() > 1.0 + kNormSlack) throw std::invalid_argument("w must lie in the unit ball");
  const double a = lift_scale(hinge_bound);
  const Eigen::Index m = points.rows();
  const Eigen::Index d = points.cols();
  Vector out = Vector::Zero(d + m);
  out.head(d) = w;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double l = std::max(0.0, gamma - labels[i] * points.row(i).dot(w));
    if (l == 0.0) continue;
    if (hinge_bound == 0.0) throw std::invalid_argument("hinge bound below the hinge loss");
    out[d + i] = a / std::sqrt(1.0 - a * a) * labels[i] * l;
  }
  return out.normalized();
}

Vector svm_train(const RowMatrix& points, std::span<const Label> labels,
                 const SvmParams& params) {
  check_labels(points, labels);
  const Eigen::Index n = points.rows();
  if (n == 0) throw std::invalid_argument("svm_train: no examples");
  if (!(params.reg_lambda > 0.0)) throw std::invalid_argument("reg_lambda must be positive");
  if (params.iterations < 1) throw std::invalid_argument("iterations must be >= 1");

  const double radius = 1.0 / std::sqrt(params.reg_lambda);
  Rng rng(params.seed);
  Vector w = Vector::Zero(points.cols());
  Vector avg = Vector::Zero(points.cols());
  for (int t = 1; t <= params.iterations; ++t) {
    const Eigen::Index i =
        std::min<Eigen::Index>(n - 1, static_cast<Eigen::Index>(uniform01(rng) * n));
    const double eta = 1.0 / (params.reg_lambda * t);
    const double margin = labels[i] * points.row(i).dot(w);
    w *= 1.0 - eta * params.reg_lambda;
    if (margin < 1.0) w += eta * labels[i] * points.row(i).transpose();
    const double wn = w.norm();
    if (wn > radius) w *= radius / wn;
    avg += (w - avg) / t;
  }
  const double an = avg.norm();
  if (an > 1.0) avg /= an;
  return avg;
}

PipelineResult pipeline_run(const RowMatrix& input, InputKind kind,
                            const LabelOracle& oracle, const AlumaConfig& aluma,
                            const PreprocessParams& params, const SvmParams& svm) {
  params.validate();
  PipelineResult out;
  out.features = kind == InputKind::kKernel ? kernel_decompose(input) : input;
  PreprocessParams half = params;
  half.delta = params.delta / 2;
  out.projected = preprocess_vectors(out.features, half);
  AlumaConfig cfg = aluma;
  cfg.delta = params.delta / 2;
  out.log = run_aluma(out.projected, oracle, cfg);
  out.labeling = out.log.labeling;
  out.w = svm_train(out.features, out.labeling, svm);
  return out;
}

}  // namespace aluma
