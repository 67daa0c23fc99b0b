#ifndef ALUMA_POOLS_H_
#define ALUMA_POOLS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aluma/geometry.h"
#include "aluma/learner.h"
#include "aluma/line.h"

namespace aluma {

struct Pool {
  RowMatrix points;
  std::vector<std::string> names;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

// Generator name, parameters, seed and hidden target; enough to regenerate.
struct GeneratorInfo {
  std::string generator;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  nlohmann::json target = nullptr;
};

struct OraclePool {
  Pool pool;
  std::vector<Label> labels;
  GeneratorInfo info;
  bool realizable = true;

  LabelOracle oracle() const { return oracle_from_labels(labels); }
};

OraclePool gen_uniform_sphere(int m, int d, std::uint64_t seed,
                              const std::optional<Vector>& planted_w = std::nullopt);

// Nonzero points of {-1, -1+c, ..., 1}^d inside the unit ball; if there are
// more than max_m of them, a seeded subset of max_m (kept in grid order).
OraclePool gen_grid_pool(double c, int d, std::uint64_t seed, std::size_t max_m,
                         const std::optional<Vector>& planted_w = std::nullopt);

enum class LinePlacement { kUniform, kGrid, kExplicit };

// kGrid puts point i at i/(m-1); kExplicit takes `explicit_points` (m ignored).
LinePool gen_line_pool(int m, double target_c, LinePlacement placement,
                       std::uint64_t seed,
                       const std::vector<double>& explicit_points = {});

// Recursive adversarial pool for the smallest-x approximately greedy policy.
// Returns x_1..x_m in construction order (x_1 = 1, x_2 = 1/2, x_3 = 0, ...).
std::vector<double> thm7_sequence(int m, double alpha);
LinePool gen_thm7_pool(int m, double alpha);

// Arc pool on a grid of step gamma/4; x_0 = nearest grid point to (1,0) is
// negative, the others positive. Row 0 is x_0.
OraclePool gen_thm8_arc_pool(double gamma);

struct TwoCirclesMode {
  bool full_support = true;
  int m = 0;  // iid sample size
  std::uint64_t seed = 0;
};

// Mixture weight of the second circle: eps / (4 ln(4 / eps)).
double two_circles_tau(double epsilon);

// Rows 0..1/eps-1 are the raised circle (S_a), the rest the equator (S_b) in
// full-support mode. Default target: w ~ (0.5 cos phi, 0.5 sin phi, 1) with
// phi = pi*eps/3, so every S_a point is positive and S_b is split by the
// sign of its first coordinate.
OraclePool gen_two_circles(double epsilon, const TwoCirclesMode& mode,
                           const std::optional<Vector>& planted_w = std::nullopt,
                           bool require_odd_half_inverse = true);

// Vertices e_i (then -e_i if requested), then face centers z/d for z in
// {-1,1}^d (bit i of the enumeration index set means z_i = -1). Labels follow
// sgn(<x,w> - 1 + 1/d). With the bias dimension every point becomes
// (x, 1/sqrt2)/sqrt(1.5) and the target is homogeneous.
OraclePool gen_octahedron(int d, const std::vector<int>& planted_sign_w,
                          bool with_bias_dim, bool with_negative_vertices);

// Unit points with |<w, x>| >= gamma for a planted unit w (random if
// absent), then round(rho m) labels flipped. info.params records the measured
// total squared margin-gamma hinge of w as "hinge".
OraclePool gen_noisy_margin_pool(int m, int d, double gamma, double rho,
                                 std::uint64_t seed,
                                 const std::optional<Vector>& planted_w = std::nullopt);

// Strict separability by a homogeneous halfspace (exact max-margin solve).
bool is_realizable(const RowMatrix& points, const std::vector<Label>& labels);

}  // namespace aluma

#endif  // ALUMA_POOLS_H_
