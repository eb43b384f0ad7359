#include "crossfeat/rng.hpp"

#include <cmath>
#include <numbers>

namespace crossfeat {

double SplitMix64::next_gaussian() {
  // Box-Muller, cosine branch only; u1 bounded away from zero.
  double u1 = next_unit();
  double u2 = next_unit();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace crossfeat
