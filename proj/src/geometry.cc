#include "aluma/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace aluma {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_label(Label y) {
  if (y != 1 && y != -1) throw std::invalid_argument("label must be -1 or +1");
}

}  // namespace

VersionSpace::VersionSpace(int dim) : dim_(dim), signed_rows_(0, dim) {
  if (dim < 1) throw std::invalid_argument("version space dimension must be >= 1");
}

VersionSpace VersionSpace::with_constraint(const Vector& x, Label y) const {
  if (x.size() != dim_) throw std::invalid_argument("constraint dimension mismatch");
  check_label(y);
  if (!(x.norm() > 0.0)) throw std::invalid_argument("constraint point must be nonzero");
  VersionSpace out(dim_);
  out.constraints_ = constraints_;
  out.constraints_.push_back({x, y});
  out.signed_rows_.resize(signed_rows_.rows() + 1, dim_);
  out.signed_rows_.topRows(signed_rows_.rows()) = signed_rows_;
  out.signed_rows_.row(signed_rows_.rows()) = static_cast<double>(y) * x.transpose();
  return out;
}

bool VersionSpace::contains(const Vector& w) const {
  if (w.size() != dim_) throw std::invalid_argument("dimension mismatch");
  if (w.squaredNorm() > 1.0) return false;
  for (const auto& c : constraints_) {
    if (!(c.y * w.dot(c.x) > 0.0)) return false;
  }
  return true;
}

bool vs_contains(const VersionSpace& vs, const Vector& w) { return vs.contains(w); }

Chord chord_from_products(double pp, double pd, double dd, const double* s,
                          const double* r, std::size_t n) {
  // dd t^2 + 2 pd t + (pp - 1) <= 0
  const double disc = std::max(0.0, pd * pd - dd * (pp - 1.0));
  const double root = std::sqrt(disc);
  double lo = (-pd - root) / dd;
  double hi = (-pd + root) / dd;
  // Need s_j + t r_j > 0 on (lo, hi). Since lo < 0 < hi whenever p is inside,
  // a constraint can only tighten a bound it violates there; dividing only
  // then keeps the common case branch-predictable.
  for (std::size_t j = 0; j < n; ++j) {
    if (s[j] + lo * r[j] < 0.0) lo = -s[j] / r[j];
    if (s[j] + hi * r[j] < 0.0) hi = -s[j] / r[j];
  }
  return {lo, hi};
}

Chord chord(const VersionSpace& vs, const Vector& p, const Vector& dir) {
  if (p.size() != vs.dim() || dir.size() != vs.dim()) {
    throw std::invalid_argument("chord: dimension mismatch");
  }
  const double dd = dir.squaredNorm();
  if (!(dd > 0.0)) throw std::invalid_argument("chord: zero direction");
  if (!vs.contains(p)) throw std::invalid_argument("chord: point not in body");
  const RowMatrix& a = vs.signed_rows();
  const Vector s = a * p;
  const Vector r = a * dir;
  return chord_from_products(p.squaredNorm(), p.dot(dir), dd, s.data(), r.data(),
                             static_cast<std::size_t>(a.rows()));
}

double margin_of(const Vector& w, const RowMatrix& pool,
                 std::span<const Label> labels) {
  if (pool.rows() == 0) throw std::invalid_argument("margin_of: empty pool");
  if (static_cast<std::size_t>(pool.rows()) != labels.size()) {
    throw std::invalid_argument("margin_of: labels/pool size mismatch");
  }
  if (w.size() != pool.cols()) throw std::invalid_argument("margin_of: dimension mismatch");
  const double wn = w.norm();
  if (!(wn > 0.0)) throw std::invalid_argument("margin_of: zero weight vector");
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < pool.rows(); ++i) {
    const double xn = pool.row(i).norm();
    if (!(xn > 0.0)) throw std::invalid_argument("margin_of: zero pool point");
    check_label(labels[i]);
    best = std::min(best, labels[i] * pool.row(i).dot(w) / (wn * xn));
  }
  return best;
}

double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

ArcSet full_circle() { return {{0.0, kTwoPi}}; }

ArcSet halfplane_arcs(const Vector& x, Label y) {
  if (x.size() != 2) throw std::invalid_argument("halfplane_arcs: dim != 2");
  const double psi = std::atan2(y * x[1], y * x[0]);
  const double lo = normalize_angle(psi - std::numbers::pi / 2.0);
  const double hi = lo + std::numbers::pi;
  if (hi <= kTwoPi) return {{lo, hi}};
  return {{0.0, hi - kTwoPi}, {lo, kTwoPi}};
}

ArcSet intersect_arcs(const ArcSet& a, const ArcSet& b) {
  ArcSet out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

double arc_fraction(const ArcSet& arcs) {
  double total = 0.0;
  for (const auto& iv : arcs) total += iv.hi - iv.lo;
  return total / kTwoPi;
}

ArcSet version_space_arcs(const VersionSpace& vs) {
  if (vs.dim() != 2) throw std::invalid_argument("arc measure requires dim 2");
  ArcSet arcs = full_circle();
  for (const auto& c : vs.constraints()) {
    arcs = intersect_arcs(arcs, halfplane_arcs(c.x, c.y));
    if (arcs.empty()) break;
  }
  return arcs;
}

double arc_measure_2d(const VersionSpace& vs) {
  return arc_fraction(version_space_arcs(vs));
}

SplitMeasure split_measures_2d(const VersionSpace& vs, const Vector& x) {
  const ArcSet base = version_space_arcs(vs);
  if (x.size() != 2) throw std::invalid_argument("split_measures_2d: dim != 2");
  if (!(x.norm() > 0.0)) throw std::invalid_argument("split_measures_2d: zero point");
  return {arc_fraction(intersect_arcs(base, halfplane_arcs(x, 1))),
          arc_fraction(intersect_arcs(base, halfplane_arcs(x, -1)))};
}

}  // namespace aluma
