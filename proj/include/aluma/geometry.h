#ifndef ALUMA_GEOMETRY_H_
#define ALUMA_GEOMETRY_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace aluma {

using Vector = Eigen::VectorXd;
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Labels are always -1 or +1.
using Label = int;

// sign(0) is +1 everywhere.
inline Label sign_label(double v) { return v >= 0.0 ? 1 : -1; }

class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct SignConstraint {
  Vector x;
  Label y = 1;
};

struct Hypothesis {
  Vector w;
  Label label(const Vector& x) const { return sign_label(w.dot(x)); }
};

// Unit ball intersected with the open halfspaces {w : y <w, x> > 0}.
class VersionSpace {
 public:
  explicit VersionSpace(int dim);

  VersionSpace with_constraint(const Vector& x, Label y) const;

  int dim() const { return dim_; }
  std::size_t num_constraints() const { return constraints_.size(); }
  const std::vector<SignConstraint>& constraints() const { return constraints_; }
  // Row j is y_j * x_j.
  const RowMatrix& signed_rows() const { return signed_rows_; }

  bool contains(const Vector& w) const;

 private:
  int dim_;
  std::vector<SignConstraint> constraints_;
  RowMatrix signed_rows_;
};

bool vs_contains(const VersionSpace& vs, const Vector& w);

struct Chord {
  double lo;
  double hi;
};

// {t : p + t dir in vs} = (lo, hi).
Chord chord(const VersionSpace& vs, const Vector& p, const Vector& dir);

// Chord from precomputed products: pp = |p|^2, pd = <p,dir>, dd = |dir|^2,
// s_j = <a_j,p>, r_j = <a_j,dir>. Used by the sampler's inner loop.
Chord chord_from_products(double pp, double pd, double dd, const double* s,
                          const double* r, std::size_t n);

double margin_of(const Vector& w, const RowMatrix& pool,
                 std::span<const Label> labels);

double arc_measure_2d(const VersionSpace& vs);

struct SplitMeasure {
  double plus;
  double minus;
};

SplitMeasure split_measures_2d(const VersionSpace& vs, const Vector& x);

// Angular intervals on [0, 2pi), half-open, sorted and disjoint.
struct AngleInterval {
  double lo;
  double hi;
};
using ArcSet = std::vector<AngleInterval>;

ArcSet full_circle();
// Directions theta with y <(cos theta, sin theta), x> > 0.
ArcSet halfplane_arcs(const Vector& x, Label y);
ArcSet intersect_arcs(const ArcSet& a, const ArcSet& b);
double arc_fraction(const ArcSet& arcs);
ArcSet version_space_arcs(const VersionSpace& vs);

double normalize_angle(double theta);

}  // namespace aluma

#endif  // ALUMA_GEOMETRY_H_
