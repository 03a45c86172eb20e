#pragma once

// Order-insensitive reductions. Ensemble averages are formed by writing one
// value per member into an indexed buffer and reducing it here, so the result
// does not depend on how members were scheduled across threads.

#include <cmath>
#include <cstddef>
#include <span>

namespace hybridyn {

// Neumaier's variant of Kahan summation.
inline double compensated_sum(std::span<const double> v) noexcept {
  double sum = 0.0;
  double c = 0.0;
  for (double x : v) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

// Recursive halving down to blocks of 32, each block compensated.
inline double pairwise_sum(std::span<const double> v) noexcept {
  if (v.size() <= 32) return compensated_sum(v);
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace hybridyn
