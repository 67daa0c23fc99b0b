#ifndef ALUMA_RNG_H_
#define ALUMA_RNG_H_

#include <cstdint>
#include <random>

#include "aluma/geometry.h"

namespace aluma {

using Rng = std::mt19937_64;

// Counter-based seed derivation (splitmix64 finalizer over seed and index).
std::uint64_t mix64(std::uint64_t seed, std::uint64_t index);

Vector random_unit_vector(int dim, Rng& rng);
Vector random_ball_point(int dim, Rng& rng);
// Uniform in [0, 1).
double uniform01(Rng& rng);

}  // namespace aluma

#endif  // ALUMA_RNG_H_
