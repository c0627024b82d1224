#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hilbmap/kernels.hpp"

namespace hilbmap::simd {
namespace {

const KernelTable* select_default() {
  if (const char* env = std::getenv("HILBMAP_SIMD"); env && std::string(env) == "scalar")
    return &scalar_kernels();
  if (isa_available(Isa::avx2)) return &avx2_kernels();
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{select_default()};
  return table;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(HILBMAP_HAVE_AVX2_TU)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void force(Isa isa) {
  if (!isa_available(isa))
    throw std::runtime_error("SIMD variant not available: " + std::string(isa_name(isa)));
  slot().store(isa == Isa::avx2 ? &avx2_kernels() : &scalar_kernels(),
               std::memory_order_release);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace hilbmap::simd
