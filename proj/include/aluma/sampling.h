#ifndef ALUMA_SAMPLING_H_
#define ALUMA_SAMPLING_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "aluma/geometry.h"

namespace aluma {

struct SamplerConfig {
  int mix_steps = 1000;
  std::uint64_t seed = 0;
  std::optional<Vector> warm_start;
};

// One hypothesis per row, all inside the version space they were drawn from.
struct HypothesisBatch {
  RowMatrix w;

  std::size_t size() const { return static_cast<std::size_t>(w.rows()); }
  Hypothesis operator[](std::size_t i) const {
    return {w.row(static_cast<Eigen::Index>(i)).transpose()};
  }
};

Vector find_interior_point(const VersionSpace& vs, std::uint64_t seed);

Vector hit_and_run(const VersionSpace& vs, const SamplerConfig& config);

// Member j uses seed mix64(config.seed, j); all members start from the same
// point (warm start if feasible, else find_interior_point(vs, config.seed)).
HypothesisBatch sample_batch(const VersionSpace& vs, int count,
                             const SamplerConfig& config);

Label majority_vote(const HypothesisBatch& batch, const Vector& x);
std::vector<Label> majority_vote_all(const HypothesisBatch& batch,
                                     const RowMatrix& points);

}  // namespace aluma

#endif  // ALUMA_SAMPLING_H_
