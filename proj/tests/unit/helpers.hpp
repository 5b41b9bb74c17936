#pragma once

#include <random>

#include "semidirac/types.hpp"

namespace testutil {

inline semidirac::Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

inline double max_abs_diff(const auto& a, const auto& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testutil
