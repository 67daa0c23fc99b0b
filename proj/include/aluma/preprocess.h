#ifndef ALUMA_PREPROCESS_H_
#define ALUMA_PREPROCESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aluma/aluma.h"
#include "aluma/geometry.h"
#include "aluma/learner.h"

namespace aluma {

struct PreprocessParams {
  double gamma = 0.1;        // assumed margin
  double hinge_bound = 0.0;  // H
  double delta = 0.1;
  std::optional<int> jl_dim;
  std::uint64_t seed = 0;
  double jl_constant = 8.0;  // C in ceil(C (H+1) ln(m/delta) / gamma^2)
  // Return the lifted points unprojected (testing aid).
  bool bypass_projection = false;

  void validate() const;
};

int default_jl_dim(std::size_t m, const PreprocessParams& params);

// U with K = U U^T from a symmetric eigendecomposition; eigenvalues in
// [-1e-8 scale, 0) are clamped to zero, anything more negative is rejected.
RowMatrix kernel_decompose(const RowMatrix& kernel);

// a = sqrt(1 / (1 + sqrt(H))).
double lift_scale(double hinge_bound);

// x'_i = (a x_i; sqrt(1 - a^2) e_i), dimension d + m.
RowMatrix lift(const RowMatrix& points, double hinge_bound);

// xbar_i = M x'_i / sqrt(k) with i.i.d. random signs, row r of M drawn from
// mix64(seed, r); results longer than 1 are scaled back to unit norm.
RowMatrix jl_project(const RowMatrix& points, int k, std::uint64_t seed);

RowMatrix preprocess_vectors(const RowMatrix& points, const PreprocessParams& params);
RowMatrix preprocess_kernel(const RowMatrix& kernel, const PreprocessParams& params);

// sum_i max(0, gamma - y_i <w, x_i>)^2
double total_hinge(const Vector& w, double gamma, const RowMatrix& points,
                   std::span<const Label> labels);

// Unit vector separating lift(points, H) with margin >= gamma / (1 + sqrt(H))
// whenever |w| <= 1 and H >= total_hinge(w, gamma, points, labels).
Vector lifted_witness(const Vector& w, double gamma, const RowMatrix& points,
                      std::span<const Label> labels, double hinge_bound);

struct SvmParams {
  double reg_lambda = 1e-3;
  int iterations = 100000;
  std::uint64_t seed = 0;
};

// Averaged stochastic subgradient on (lambda/2)|w|^2 + mean hinge; the
// result is scaled into the unit ball.
Vector svm_train(const RowMatrix& points, std::span<const Label> labels,
                 const SvmParams& params);

enum class InputKind { kVectors, kKernel };

struct PipelineResult {
  Vector w;                     // SVM on the original representation
  std::vector<Label> labeling;  // ALuMA's output on the pool
  QueryLog log;
  RowMatrix features;           // rows the SVM was trained on
  RowMatrix projected;          // what ALuMA saw
};

// Preprocess with delta/2, ALuMA on the result with delta/2, then an SVM on
// (original rows, ALuMA labels). For kernel input the original rows are the
// rows of U. aluma.delta is overwritten with params.delta / 2.
PipelineResult pipeline_run(const RowMatrix& input, InputKind kind,
                            const LabelOracle& oracle, const AlumaConfig& aluma,
                            const PreprocessParams& params, const SvmParams& svm);

}  // namespace aluma

#endif  // ALUMA_PREPROCESS_H_
