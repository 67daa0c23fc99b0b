#include "aluma/sampling.h"

#include <algorithm>
#include <cmath>

#include "aluma/max_margin.h"
#include "aluma/rng.h"

namespace aluma {

namespace {

constexpr std::uint64_t kInteriorSalt = 0x1e7e71057ULL;
constexpr double kInset = 1e-12;
constexpr int kRefreshEvery = 64;
constexpr int kSubgradientCap = 100000;

Vector resolve_start(const VersionSpace& vs, const SamplerConfig& config) {
  if (config.mix_steps < 1) throw std::invalid_argument("mix_steps must be >= 1");
  if (config.warm_start && config.warm_start->size() == vs.dim() &&
      vs.contains(*config.warm_start)) {
    return *config.warm_start;
  }
  return find_interior_point(vs, config.seed);
}

// Pulls a point that drifted out through rounding back toward `anchor`.
Vector retreat(const VersionSpace& vs, const Vector& anchor, const Vector& p) {
  double step = 1e-12;
  for (int k = 0; k < 60; ++k, step *= 2.0) {
    const Vector q = anchor + (1.0 - std::min(step, 1.0)) * (p - anchor);
    if (vs.contains(q)) return q;
  }
  return anchor;
}

Vector run_chain(const VersionSpace& vs, const Vector& start, int steps, Rng& rng) {
  // Column-major copy: A * dir becomes d contiguous axpy passes.
  const Eigen::MatrixXd a = vs.signed_rows();
  const Eigen::Index n = a.rows();
  const int dim = vs.dim();
  std::normal_distribution<double> normal(0.0, 1.0);

  Vector p = start;
  Vector dir(dim);
  Eigen::VectorXd s = a * p;
  Eigen::VectorXd r(n);
  for (int step = 0; step < steps; ++step) {
    double dd = 0.0;
    do {
      for (int i = 0; i < dim; ++i) dir[i] = normal(rng);
      dd = dir.squaredNorm();
    } while (!(dd > 0.0));
    dir /= std::sqrt(dd);
    r.noalias() = a * dir;
    const Chord c = chord_from_products(p.squaredNorm(), p.dot(dir), 1.0, s.data(),
                                        r.data(), static_cast<std::size_t>(n));
    const double u = uniform01(rng);
    if (!(c.lo < c.hi)) continue;
    const double frac = kInset + (1.0 - 2.0 * kInset) * u;
    const double t = c.lo + frac * (c.hi - c.lo);
    p.noalias() += t * dir;
    if ((step + 1) % kRefreshEvery == 0) {
      s.noalias() = a * p;
    } else {
      s.noalias() += t * r;
    }
  }
  if (!vs.contains(p)) p = retreat(vs, start, p);
  return p;
}

}  // namespace

Vector find_interior_point(const VersionSpace& vs, std::uint64_t seed) {
  Rng rng(mix64(seed, kInteriorSalt));
  Vector w = random_ball_point(vs.dim(), rng);
  if (vs.contains(w)) return w;

  RowMatrix unit = vs.signed_rows();
  for (Eigen::Index i = 0; i < unit.rows(); ++i) unit.row(i).normalize();
  for (int t = 1; t <= kSubgradientCap; ++t) {
    Eigen::Index worst = 0;
    (unit * w).minCoeff(&worst);
    w += unit.row(worst).transpose() / std::sqrt(static_cast<double>(t));
    const double nrm = w.norm();
    if (nrm > 1.0) w /= nrm;
    if (nrm > 0.0) {
      const Vector cand = 0.5 * w / w.norm();
      if (vs.contains(cand)) return cand;
    }
  }
  const MaxMarginResult mm = max_margin(unit);
  if (mm.lower > 0.0) {
    const Vector cand = 0.5 * mm.w;
    if (vs.contains(cand)) return cand;
  }
  throw InfeasibleError("version space appears empty: no interior point found");
}

Vector hit_and_run(const VersionSpace& vs, const SamplerConfig& config) {
  const Vector start = resolve_start(vs, config);
  Rng rng(config.seed);
  return run_chain(vs, start, config.mix_steps, rng);
}

HypothesisBatch sample_batch(const VersionSpace& vs, int count,
                             const SamplerConfig& config) {
  if (count < 1) throw std::invalid_argument("sample_batch: count must be >= 1");
  const Vector start = resolve_start(vs, config);
  HypothesisBatch batch;
  batch.w.resize(count, vs.dim());
  for (int j = 0; j < count; ++j) {
    Rng rng(mix64(config.seed, static_cast<std::uint64_t>(j)));
    batch.w.row(j) = run_chain(vs, start, config.mix_steps, rng).transpose();
  }
  return batch;
}

Label majority_vote(const HypothesisBatch& batch, const Vector& x) {
  if (batch.size() == 0) throw std::invalid_argument("majority_vote: empty batch");
  const Eigen::VectorXd dots = batch.w * x;
  long sum = 0;
  for (Eigen::Index j = 0; j < dots.size(); ++j) sum += sign_label(dots[j]);
  return sum >= 0 ? 1 : -1;
}

std::vector<Label> majority_vote_all(const HypothesisBatch& batch,
                                     const RowMatrix& points) {
  if (batch.size() == 0) throw std::invalid_argument("majority_vote: empty batch");
  std::vector<Label> out(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out[i] = majority_vote(batch, points.row(i).transpose());
  }
  return out;
}

}  // namespace aluma
