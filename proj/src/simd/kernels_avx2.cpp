// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include <cmath>
#include <limits>

#include "hybridyn/simd/kernels.hpp"

namespace hybridyn::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void complex_matvec(std::size_t n, const double* g_re, const double* g_im,
                    const double* z_re, const double* z_im, double* w_re,
                    double* w_im) {
  const std::size_t body = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n; ++i) {
    const double* gr = g_re + i * n;
    const double* gi = g_im + i * n;
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j < body; j += 4) {
      const __m256d vgr = _mm256_loadu_pd(gr + j);
      const __m256d vgi = _mm256_loadu_pd(gi + j);
      const __m256d vzr = _mm256_loadu_pd(z_re + j);
      const __m256d vzi = _mm256_loadu_pd(z_im + j);
      acc_re = _mm256_fmadd_pd(vgr, vzr, acc_re);
      acc_re = _mm256_fnmadd_pd(vgi, vzi, acc_re);
      acc_im = _mm256_fmadd_pd(vgr, vzi, acc_im);
      acc_im = _mm256_fmadd_pd(vgi, vzr, acc_im);
    }
    double re = hsum(acc_re);
    double im = hsum(acc_im);
    for (; j < n; ++j) {
      re += gr[j] * z_re[j] - gi[j] * z_im[j];
      im += gr[j] * z_im[j] + gi[j] * z_re[j];
    }
    w_re[i] = re;
    w_im[i] = im;
  }
}

double dot(std::size_t n, const double* a, const double* b) {
  const std::size_t body = n & ~std::size_t{7};
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i < body; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  const std::size_t body = n & ~std::size_t{3};
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i < body; i += 4) {
    _mm256_storeu_pd(
        y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scaled_add(std::size_t n, const double* a, double alpha, const double* b,
                double* out) {
  const std::size_t body = n & ~std::size_t{3};
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i < body; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(b + i),
                                              _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) out[i] = a[i] + alpha * b[i];
}

double max_abs_diff(std::size_t n, const double* a, const double* b) {
  const std::size_t body = n & ~std::size_t{3};
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  __m256d unordered = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i < body; i += 4) {
    const __m256d d = _mm256_andnot_pd(
        sign, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    unordered = _mm256_or_pd(unordered, _mm256_cmp_pd(d, d, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, d);
  }
  if (_mm256_movemask_pd(unordered) != 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = lanes[0];
  for (int k = 1; k < 4; ++k) r = lanes[k] > r ? lanes[k] : r;
  for (; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (std::isnan(d)) return d;
    if (d > r) r = d;
  }
  return r;
}

constexpr KernelTable kAvx2Table{Isa::avx2, complex_matvec, dot, axpy,
                                 scaled_add, max_abs_diff};

}  // namespace

const KernelTable* avx2_kernels_impl() noexcept { return &kAvx2Table; }

}  // namespace hybridyn::simd
