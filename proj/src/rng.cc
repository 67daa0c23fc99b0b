#include "aluma/rng.h"

#include <cmath>

namespace aluma {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) {
  return splitmix(splitmix(seed) ^ (index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

double uniform01(Rng& rng) {
  // 53 random bits.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vector random_unit_vector(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  double n2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
    n2 = v.squaredNorm();
  } while (!(n2 > 0.0));
  return v / std::sqrt(n2);
}

Vector random_ball_point(int dim, Rng& rng) {
  const double r = std::pow(uniform01(rng), 1.0 / dim);
  return r * random_unit_vector(dim, rng);
}

}  // namespace aluma
