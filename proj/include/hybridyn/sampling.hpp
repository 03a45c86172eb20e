#pragma once

#include <cstddef>

#include "hybridyn/oscillator_rep.hpp"
#include "hybridyn/rng.hpp"

namespace hybridyn {

// Uniform point on the constraint sphere C = 1 (radius sqrt(2) in 2N
// dimensions): a normalized 2N-dimensional Gaussian draw scaled by sqrt(2).
QmPhasePoint random_sphere_point(std::size_t n, Philox& rng);

// Hermitian matrix with independent standard-normal real and imaginary parts
// above the diagonal and real normal diagonal entries.
HermitianMatrix random_hermitian(std::size_t n, Philox& rng, double scale = 1.0);

}  // namespace hybridyn
