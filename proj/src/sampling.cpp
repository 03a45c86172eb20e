#include "hybridyn/sampling.hpp"

#include <cmath>
#include <numbers>

#include "hybridyn/errors.hpp"

namespace hybridyn {

QmPhasePoint random_sphere_point(std::size_t n, Philox& rng) {
  if (n == 0) throw DimensionError("sphere dimension must be positive");
  QmPhasePoint p;
  p.X.resize(n);
  p.P.resize(n);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      p.X[i] = rng.normal();
      p.P[i] = rng.normal();
      norm2 += p.X[i] * p.X[i] + p.P[i] * p.P[i];
    }
  } while (norm2 == 0.0);
  const double scale = std::numbers::sqrt2 / std::sqrt(norm2);
  for (std::size_t i = 0; i < n; ++i) {
    p.X[i] *= scale;
    p.P[i] *= scale;
  }
  return p;
}

HermitianMatrix random_hermitian(std::size_t n, Philox& rng, double scale) {
  HermitianMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h.set(i, i, scale * rng.normal());
    for (std::size_t j = i + 1; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      h.set(i, j, scale * cplx(re, im));
    }
  }
  return h;
}

}  // namespace hybridyn
