#pragma once

// Data-parallel inner loops of the oscillator representation.
//
// Every kernel has a portable scalar reference implementation. Wider
// variants (currently AVX2+FMA) are compiled into separate translation units
// and selected at runtime from CPUID; tests check them against the reference.
// Complex data is stored split: separate real and imaginary arrays.

#include <cstddef>
#include <string_view>

namespace hybridyn::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;

  // w = G z for an n x n complex matrix G (row-major, split storage) and a
  // complex vector z. Output arrays must not alias the inputs.
  void (*complex_matvec)(std::size_t n, const double* g_re, const double* g_im,
                         const double* z_re, const double* z_im, double* w_re,
                         double* w_im);

  double (*dot)(std::size_t n, const double* a, const double* b);

  // y += alpha * x
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);

  // out = a + alpha * b
  void (*scaled_add)(std::size_t n, const double* a, double alpha,
                     const double* b, double* out);

  // max_i |a_i - b_i|
  double (*max_abs_diff)(std::size_t n, const double* a, const double* b);
};

const KernelTable& scalar_kernels() noexcept;

// nullptr when the variant was not compiled in.
const KernelTable* avx2_kernels() noexcept;

bool cpu_supports(Isa isa) noexcept;

// Table used by the library. Defaults to the widest supported ISA.
const KernelTable& active() noexcept;
Isa active_isa() noexcept;

// Throws std::invalid_argument if the ISA is unavailable on this build/CPU.
void select(Isa isa);

}  // namespace hybridyn::simd
