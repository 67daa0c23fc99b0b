#include "aluma/pools.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "aluma/max_margin.h"
#include "aluma/preprocess.h"
#include "aluma/rng.h"

namespace aluma {

namespace {

constexpr std::uint64_t kTargetSalt = 0x7a26e7ULL;

nlohmann::json to_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<Label> label_by(const RowMatrix& points, const Vector& w) {
  std::vector<Label> y(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) y[i] = sign_label(points.row(i).dot(w));
  return y;
}

Vector resolve_target(int d, std::uint64_t seed, const std::optional<Vector>& planted) {
  if (planted) {
    if (planted->size() != d) throw std::invalid_argument("planted_w dimension mismatch");
    if (!(planted->norm() > 0.0)) throw std::invalid_argument("planted_w must be nonzero");
    return *planted;
  }
  Rng rng(mix64(seed, kTargetSalt));
  return random_unit_vector(d, rng);
}

int reciprocal_integer(double c, const char* what) {
  if (!(c > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
  const double r = 1.0 / c;
  const double n = std::round(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, r)) {
    throw std::invalid_argument(std::string("1/") + what + " must be an integer");
  }
  return static_cast<int>(n);
}

}  // namespace

std::vector<Label> LinePool::labels() const {
  std::vector<Label> y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) y[i] = label(i);
  return y;
}

bool is_realizable(const RowMatrix& points, const std::vector<Label>& labels) {
  // A zero point is +1 under every w, so it only constrains through its label.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (points.row(i).squaredNorm() > 0.0) {
      keep.push_back(i);
    } else if (labels.at(i) != 1) {
      return false;
    }
  }
  if (keep.empty()) return true;
  RowMatrix x(static_cast<Eigen::Index>(keep.size()), points.cols());
  std::vector<Label> y(keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j) {
    x.row(static_cast<Eigen::Index>(j)) = points.row(keep[j]);
    y[j] = labels.at(keep[j]);
  }
  return max_margin_normalized(signed_rows(x, y)).lower > 0.0;
}

OraclePool gen_uniform_sphere(int m, int d, std::uint64_t seed,
                              const std::optional<Vector>& planted_w) {
  if (m < 1 || d < 1) throw std::invalid_argument("gen_uniform_sphere: m, d must be >= 1");
  OraclePool out;
  Rng rng(seed);
  out.pool.points.resize(m, d);
  for (int i = 0; i < m; ++i) out.pool.points.row(i) = random_unit_vector(d, rng).transpose();
  const Vector w = resolve_target(d, seed, planted_w);
  out.labels = label_by(out.pool.points, w);
  out.info = {"uniform_sphere", {{"m", m}, {"d", d}}, seed, to_json(w)};
  return out;
}

OraclePool gen_grid_pool(double c, int d, std::uint64_t seed, std::size_t max_m,
                         const std::optional<Vector>& planted_w) {
  if (d < 1) throw std::invalid_argument("gen_grid_pool: d must be >= 1");
  if (max_m < 1) throw std::invalid_argument("gen_grid_pool: max_m must be >= 1");
  const int n = reciprocal_integer(c, "c");
  const int side = 2 * n + 1;
  const double step = 1.0 / n;
  auto coord = [&](int j) { return -1.0 + j * step; };

  std::vector<Vector> pts;
  const double total = std::pow(static_cast<double>(side), d);
  if (total <= 4e6) {
    std::vector<int> idx(d, 0);
    for (;;) {
      Vector x(d);
      for (int k = 0; k < d; ++k) x[k] = coord(idx[k]);
      const double n2 = x.squaredNorm();
      if (n2 > 0.0 && n2 <= 1.0 + 1e-12) pts.push_back(x);
      int k = d - 1;
      while (k >= 0 && ++idx[k] == side) idx[k--] = 0;
      if (k < 0) break;
    }
    if (pts.size() > max_m) {
      std::vector<std::size_t> order(pts.size());
      std::iota(order.begin(), order.end(), 0);
      Rng rng(seed);
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(max_m);
      std::sort(order.begin(), order.end());
      std::vector<Vector> kept;
      for (std::size_t i : order) kept.push_back(pts[i]);
      pts = std::move(kept);
    }
  } else {
    // Grid too large to enumerate: rejection-sample distinct grid points.
    Rng rng(seed);
    std::uniform_int_distribution<int> pick(0, side - 1);
    std::unordered_set<std::string> seen;
    const std::size_t attempts = 1000 * max_m;
    for (std::size_t a = 0; a < attempts && pts.size() < max_m; ++a) {
      std::string key;
      Vector x(d);
      for (int k = 0; k < d; ++k) {
        const int j = pick(rng);
        x[k] = coord(j);
        key += std::to_string(j) + ",";
      }
      const double n2 = x.squaredNorm();
      if (n2 > 0.0 && n2 <= 1.0 + 1e-12 && seen.insert(key).second) pts.push_back(x);
    }
  }
  if (pts.empty()) throw std::invalid_argument("gen_grid_pool: no grid points in the ball");

  OraclePool out;
  out.pool.points.resize(static_cast<Eigen::Index>(pts.size()), d);
  for (std::size_t i = 0; i < pts.size(); ++i) out.pool.points.row(i) = pts[i].transpose();
  const Vector w = resolve_target(d, seed, planted_w);
  out.labels = label_by(out.pool.points, w);
  out.info = {"grid", {{"c", c}, {"d", d}, {"max_m", max_m}}, seed, to_json(w)};
  return out;
}

LinePool gen_line_pool(int m, double target_c, LinePlacement placement,
                       std::uint64_t seed, const std::vector<double>& explicit_points) {
  LinePool out;
  out.threshold = target_c;
  switch (placement) {
    case LinePlacement::kUniform: {
      if (m < 1) throw std::invalid_argument("gen_line_pool: m must be >= 1");
      Rng rng(seed);
      for (int i = 0; i < m; ++i) out.points.push_back(uniform01(rng));
      break;
    }
    case LinePlacement::kGrid:
      if (m < 1) throw std::invalid_argument("gen_line_pool: m must be >= 1");
      for (int i = 0; i < m; ++i) out.points.push_back(m == 1 ? 0.5 : double(i) / (m - 1));
      break;
    case LinePlacement::kExplicit:
      out.points = explicit_points;
      if (out.points.empty()) throw std::invalid_argument("gen_line_pool: no points");
      break;
  }
  for (double x : out.points) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("line points must lie in [0,1]");
  }
  std::sort(out.points.begin(), out.points.end());
  return out;
}

std::vector<double> thm7_sequence(int m, double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  if (m < 3) throw std::invalid_argument("thm7 pool needs m >= 3");
  std::vector<double> x = {1.0, 0.5, 0.0};
  while (static_cast<int>(x.size()) < m) {
    const double xi = x.back();
    // (x - xi)(1 - x) = (1/alpha)(x_2 - xi)(x_1 - x_2); smaller root.
    const double r = (x[1] - xi) * (x[0] - x[1]) / alpha;
    const double disc = std::max(0.0, (1.0 - xi) * (1.0 - xi) - 4.0 * r);
    x.push_back(((1.0 + xi) - std::sqrt(disc)) / 2.0);
  }
  return x;
}

LinePool gen_thm7_pool(int m, double alpha) {
  LinePool out;
  out.points = thm7_sequence(m, alpha);
  std::sort(out.points.begin(), out.points.end());
  out.threshold = 0.75;
  return out;
}

OraclePool gen_thm8_arc_pool(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0 / std::exp(1.0))) {
    throw std::invalid_argument("gamma must lie in (0, 1/e)");
  }
  const int floor_log = static_cast<int>(std::floor(std::log(1.0 / gamma)));
  int m = 1;
  while (2 * m <= floor_log) m *= 2;
  const double c = gamma / 4.0;
  auto snap = [c](double a, double b) {
    // Nearest point of the grid (multiples of c) inside the unit ball.
    const long fa = static_cast<long>(std::floor(a / c));
    const long fb = static_cast<long>(std::floor(b / c));
    Eigen::Vector2d best(0, 0);
    double best_d = std::numeric_limits<double>::infinity();
    for (long i = fa - 1; i <= fa + 2; ++i) {
      for (long j = fb - 1; j <= fb + 2; ++j) {
        const Eigen::Vector2d g(i * c, j * c);
        if (g.squaredNorm() > 1.0 + 1e-12) continue;
        const double dist = (g - Eigen::Vector2d(a, b)).norm();
        if (dist < best_d) {
          best_d = dist;
          best = g;
        }
      }
    }
    return best;
  };
  OraclePool out;
  out.pool.points.resize(m, 2);
  out.labels.assign(m, 1);
  out.pool.points.row(0) = snap(1.0, 0.0).transpose();
  out.labels[0] = -1;
  for (int i = 1; i < m; ++i) {
    const double a = std::numbers::pi / std::pow(2.0, i);
    out.pool.points.row(i) = snap(std::cos(a), std::sin(a)).transpose();
  }
  const MaxMarginResult mm = max_margin_normalized(signed_rows(out.pool.points, out.labels));
  out.realizable = mm.lower > 0.0;
  out.info = {"thm8_arc", {{"gamma", gamma}, {"grid_step", c}, {"m", m}}, 0, to_json(mm.w)};
  return out;
}

double two_circles_tau(double epsilon) {
  return epsilon / (4.0 * std::log(4.0 / epsilon));
}

OraclePool gen_two_circles(double epsilon, const TwoCirclesMode& mode,
                           const std::optional<Vector>& planted_w,
                           bool require_odd_half_inverse) {
  if (!(epsilon > 0.0 && epsilon < 1.0 / 8.0)) {
    throw std::invalid_argument("two circles: epsilon must lie in (0, 1/8)");
  }
  const int n = reciprocal_integer(epsilon, "epsilon");
  if (require_odd_half_inverse && (n % 2 != 0 || (n / 2) % 2 == 0)) {
    throw std::invalid_argument("two circles: 1/(2 epsilon) must be an odd integer");
  }
  const double s = 1.0 / std::sqrt(2.0);
  auto a_point = [&](int k) {
    const double t = 2.0 * std::numbers::pi * epsilon * k;
    return Eigen::RowVector3d(s * std::cos(t), s * std::sin(t), s);
  };
  auto b_point = [&](int k) {
    const double t = 2.0 * std::numbers::pi * epsilon * k;
    return Eigen::RowVector3d(std::cos(t), std::sin(t), 0.0);
  };

  OraclePool out;
  nlohmann::json params = {{"epsilon", epsilon}};
  if (mode.full_support) {
    out.pool.points.resize(2 * n, 3);
    for (int k = 0; k < n; ++k) {
      out.pool.points.row(k) = a_point(k);
      out.pool.points.row(n + k) = b_point(k);
    }
    params["mode"] = "full_support";
  } else {
    if (mode.m < 1) throw std::invalid_argument("two circles: iid mode needs m >= 1");
    Rng rng(mode.seed);
    const double tau = two_circles_tau(epsilon);
    std::uniform_int_distribution<int> pick(0, n - 1);
    out.pool.points.resize(mode.m, 3);
    for (int i = 0; i < mode.m; ++i) {
      const bool from_b = uniform01(rng) < tau;
      out.pool.points.row(i) = from_b ? b_point(pick(rng)) : a_point(pick(rng));
    }
    params["mode"] = "iid";
    params["m"] = mode.m;
  }
  Vector w;
  if (planted_w) {
    if (planted_w->size() != 3) throw std::invalid_argument("two circles: target must be 3-D");
    w = *planted_w;
  } else {
    const double phi = std::numbers::pi * epsilon / 3.0;
    w = Eigen::Vector3d(0.5 * std::cos(phi), 0.5 * std::sin(phi), 1.0).normalized();
  }
  out.labels = label_by(out.pool.points, w);
  out.info = {"two_circles", params, mode.seed, to_json(w)};
  return out;
}

OraclePool gen_octahedron(int d, const std::vector<int>& planted_sign_w,
                          bool with_bias_dim, bool with_negative_vertices) {
  if (d < 3) throw std::invalid_argument("octahedron: d must be >= 3");
  if (d > 20) throw std::invalid_argument("octahedron: d too large (2^d cap is 2^20)");
  if (static_cast<int>(planted_sign_w.size()) != d) {
    throw std::invalid_argument("octahedron: sign vector length must equal d");
  }
  for (int s : planted_sign_w) {
    if (s != 1 && s != -1) throw std::invalid_argument("octahedron: signs must be +-1");
  }
  const std::size_t faces = std::size_t{1} << d;
  const std::size_t m = faces + d + (with_negative_vertices ? d : 0);
  RowMatrix x = RowMatrix::Zero(static_cast<Eigen::Index>(m), d);
  std::size_t row = 0;
  for (int i = 0; i < d; ++i) x(row++, i) = 1.0;
  if (with_negative_vertices) {
    for (int i = 0; i < d; ++i) x(row++, i) = -1.0;
  }
  for (std::size_t z = 0; z < faces; ++z, ++row) {
    for (int i = 0; i < d; ++i) x(row, i) = ((z >> i) & 1U) ? -1.0 / d : 1.0 / d;
  }
  Vector w(d);
  for (int i = 0; i < d; ++i) w[i] = planted_sign_w[i];
  const double offset = 1.0 - 1.0 / d;

  OraclePool out;
  out.labels.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.labels[i] = sign_label(x.row(static_cast<Eigen::Index>(i)).dot(w) - offset);
  }
  nlohmann::json params = {{"d", d},
                           {"signs", planted_sign_w},
                           {"bias_dim", with_bias_dim},
                           {"negative_vertices", with_negative_vertices}};
  if (with_bias_dim) {
    const double b0 = 1.0 / std::sqrt(2.0);
    const double scale = 1.0 / std::sqrt(1.0 + b0 * b0);
    out.pool.points.resize(static_cast<Eigen::Index>(m), d + 1);
    out.pool.points.leftCols(d) = scale * x;
    out.pool.points.col(d).setConstant(scale * b0);
    Vector target(d + 1);
    target.head(d) = w;
    target[d] = -offset / b0;
    out.info = {"octahedron", params, 0, to_json(target.normalized())};
    out.realizable = true;
  } else {
    out.pool.points = x;
    out.info = {"octahedron", params, 0, nlohmann::json{{"affine_w", planted_sign_w}}};
    out.realizable = is_realizable(out.pool.points, out.labels);
  }
  return out;
}

OraclePool gen_noisy_margin_pool(int m, int d, double gamma, double rho,
                                 std::uint64_t seed, const std::optional<Vector>& planted_w) {
  if (m < 1 || d < 2) throw std::invalid_argument("noisy pool: need m >= 1, d >= 2");
  if (!(gamma >= 0.0 && gamma < 0.5)) throw std::invalid_argument("noisy pool: gamma in [0, 0.5)");
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("noisy pool: rho in [0, 1]");
  const Vector w = resolve_target(d, seed, planted_w).normalized();
  Rng rng(seed);
  OraclePool out;
  out.pool.points.resize(m, d);
  for (int i = 0; i < m;) {
    const Vector x = random_unit_vector(d, rng);
    if (std::abs(x.dot(w)) < gamma) continue;
    out.pool.points.row(i++) = x.transpose();
  }
  out.labels = label_by(out.pool.points, w);
  std::vector<std::size_t> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  const auto flips = static_cast<std::size_t>(std::lround(rho * m));
  // Partial Fisher-Yates picks the flipped set.
  for (std::size_t i = 0; i < flips; ++i) {
    const std::size_t j = i + std::min(idx.size() - i - 1,
                                       static_cast<std::size_t>(uniform01(rng) * (idx.size() - i)));
    std::swap(idx[i], idx[j]);
    out.labels[idx[i]] = -out.labels[idx[i]];
  }
  const double hinge = total_hinge(w, gamma, out.pool.points, out.labels);
  out.info = {"noisy_margin",
              {{"m", m}, {"d", d}, {"gamma", gamma}, {"rho", rho}, {"flips", flips},
               {"hinge", hinge}},
              seed,
              to_json(w)};
  out.realizable = is_realizable(out.pool.points, out.labels);
  return out;
}

}  // namespace aluma
