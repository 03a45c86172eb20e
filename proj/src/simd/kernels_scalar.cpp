#include "hybridyn/simd/kernels.hpp"

#include <cmath>

namespace hybridyn::simd {
namespace {

void complex_matvec(std::size_t n, const double* g_re, const double* g_im,
                    const double* z_re, const double* z_im, double* w_re,
                    double* w_im) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* gr = g_re + i * n;
    const double* gi = g_im + i * n;
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc_re += gr[j] * z_re[j] - gi[j] * z_im[j];
      acc_im += gr[j] * z_im[j] + gi[j] * z_re[j];
    }
    w_re[i] = acc_re;
    w_im[i] = acc_im;
  }
}

double dot(std::size_t n, const double* a, const double* b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scaled_add(std::size_t n, const double* a, double alpha, const double* b,
                double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + alpha * b[i];
}

double max_abs_diff(std::size_t n, const double* a, const double* b) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m || std::isnan(d)) m = d;
  }
  return m;
}

constexpr KernelTable kScalarTable{Isa::scalar, complex_matvec, dot, axpy,
                                   scaled_add, max_abs_diff};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalarTable; }

}  // namespace hybridyn::simd
