#include <atomic>
#include <stdexcept>
#include <string>

#include "hybridyn/simd/kernels.hpp"

namespace hybridyn::simd {

#if defined(HYBRIDYN_HAVE_AVX2)
const KernelTable* avx2_kernels_impl() noexcept;
#endif

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() noexcept {
#if defined(HYBRIDYN_HAVE_AVX2)
  return avx2_kernels_impl();
#else
  return nullptr;
#endif
}

bool cpu_supports(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(HYBRIDYN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace {

const KernelTable* best_available() noexcept {
  if (cpu_supports(Isa::avx2)) return avx2_kernels();
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{best_available()};
  return table;
}

}  // namespace

const KernelTable& active() noexcept {
  return *current().load(std::memory_order_acquire);
}

Isa active_isa() noexcept { return active().isa; }

void select(Isa isa) {
  if (!cpu_supports(isa)) {
    throw std::invalid_argument("kernel ISA '" + std::string(isa_name(isa)) +
                                "' is not available on this build or CPU");
  }
  const KernelTable* table =
      isa == Isa::scalar ? &scalar_kernels() : avx2_kernels();
  current().store(table, std::memory_order_release);
}

}  // namespace hybridyn::simd
