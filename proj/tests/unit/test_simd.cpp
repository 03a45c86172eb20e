#include <doctest.h>

#include <cmath>
#include <vector>

#include "hybridyn/rng.hpp"
#include "hybridyn/simd/kernels.hpp"

namespace simd = hybridyn::simd;

namespace {

std::vector<double> randn(std::size_t n, hybridyn::Philox& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

}  // namespace

TEST_CASE("wide kernels agree with the scalar reference") {
  const simd::KernelTable* wide = simd::avx2_kernels();
  if (!wide || !simd::cpu_supports(simd::Isa::avx2)) {
    MESSAGE("AVX2 kernels unavailable; skipping");
    return;
  }
  const simd::KernelTable& ref = simd::scalar_kernels();
  hybridyn::Philox rng(61);
  for (std::size_t n = 0; n <= 37; ++n) {
    const auto gr = randn(n * n, rng), gi = randn(n * n, rng);
    const auto zr = randn(n, rng), zi = randn(n, rng);
    std::vector<double> wr(n), wi(n), vr(n), vi(n);
    ref.complex_matvec(n, gr.data(), gi.data(), zr.data(), zi.data(), wr.data(), wi.data());
    wide->complex_matvec(n, gr.data(), gi.data(), zr.data(), zi.data(), vr.data(), vi.data());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::fabs(wr[i] - vr[i]) <= 1e-13 * (1.0 + std::fabs(wr[i])) * static_cast<double>(n));
      CHECK(std::fabs(wi[i] - vi[i]) <= 1e-13 * (1.0 + std::fabs(wi[i])) * static_cast<double>(n));
    }
    CHECK(std::fabs(ref.dot(n, zr.data(), zi.data()) - wide->dot(n, zr.data(), zi.data())) <=
          1e-13 * (1.0 + static_cast<double>(n)));
    std::vector<double> y1 = zi, y2 = zi;
    ref.axpy(n, 0.37, zr.data(), y1.data());
    wide->axpy(n, 0.37, zr.data(), y2.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(y1[i] - y2[i]) <= 1e-15 * (1.0 + std::fabs(y1[i])));
    ref.scaled_add(n, zr.data(), -1.3, zi.data(), y1.data());
    wide->scaled_add(n, zr.data(), -1.3, zi.data(), y2.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(y1[i] - y2[i]) <= 1e-15 * (1.0 + std::fabs(y1[i])));
    CHECK(ref.max_abs_diff(n, zr.data(), zi.data()) == wide->max_abs_diff(n, zr.data(), zi.data()));
  }
}

TEST_CASE("selection") {
  const simd::Isa before = simd::active_isa();
  simd::select(simd::Isa::scalar);
  CHECK(simd::active().isa == simd::Isa::scalar);
  CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
  if (simd::avx2_kernels() && simd::cpu_supports(simd::Isa::avx2)) {
    simd::select(simd::Isa::avx2);
    CHECK(simd::active().isa == simd::Isa::avx2);
  } else {
    CHECK_THROWS(simd::select(simd::Isa::avx2));
  }
  simd::select(before);
}

TEST_CASE("scalar kernel values") {
  const simd::KernelTable& k = simd::scalar_kernels();
  const double gr[4] = {1, 2, 3, 4}, gi[4] = {0, 1, -1, 0};
  const double zr[2] = {1, 0}, zi[2] = {0, 1};
  double wr[2], wi[2];
  k.complex_matvec(2, gr, gi, zr, zi, wr, wi);
  // (1 + 0i)*1 + (2 + i)*i = 1 + 2i - 1 = 0 + 2i
  CHECK(wr[0] == 0.0);
  CHECK(wi[0] == 2.0);
  // (3 - i)*1 + 4*i = 3 + 3i
  CHECK(wr[1] == 3.0);
  CHECK(wi[1] == 3.0);
}
