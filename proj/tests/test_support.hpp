#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "oscnorm/gridfn.hpp"

namespace oscnorm::testing {

// Random grid functions for property tests. Values are drawn from a few
// shapes so ties, constants and large jumps all show up.
inline GridFunction random_grid(std::mt19937_64& rng, int dim, int level) {
  const std::size_t n = std::size_t{1} << (dim * level);
  std::vector<double> cells(n);
  std::uniform_int_distribution<int> shape(0, 3);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> small(-3, 3);
  switch (shape(rng)) {
    case 0:
      for (double& v : cells) v = normal(rng);
      break;
    case 1:
      for (double& v : cells) v = small(rng);
      break;
    case 2:
      for (double& v : cells) v = std::exp(2.0 * normal(rng));
      break;
    default: {
      const double base = normal(rng);
      for (double& v : cells) v = base;
      cells[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] += 5.0;
      break;
    }
  }
  return GridFunction(dim, level, std::move(cells));
}

// Cells that are small dyadic rationals, so sums are exact in binary64.
inline GridFunction dyadic_grid(std::mt19937_64& rng, int dim, int level) {
  const std::size_t n = std::size_t{1} << (dim * level);
  std::vector<double> cells(n);
  std::uniform_int_distribution<int> num(-64, 64);
  for (double& v : cells) v = num(rng) / 8.0;
  return GridFunction(dim, level, std::move(cells));
}

inline double rel_err(double a, double b) {
  const double ref = std::max(std::abs(a), std::abs(b));
  return ref > 0.0 ? std::abs(a - b) / ref : 0.0;
}

}  // namespace oscnorm::testing
