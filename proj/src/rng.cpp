#include "udag/rng.hpp"

#include <cmath>
#include <numbers>

namespace udag {

double SplitMix64::gaussian() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace udag
