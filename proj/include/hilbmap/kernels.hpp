#pragma once

// Reduction kernels behind the quadrature sums.
//
// Every variant accumulates in eight interleaved lanes (index i goes to lane
// i % 8), folds the lanes in the fixed order ((l0+l4)+(l2+l6)) + ((l1+l5)+(l3+l7)),
// then adds the tail sequentially. Products are fused with std::fma in the
// scalar path and vfmadd in the vector path, so all variants return
// bit-identical results for identical inputs.

#include <cstddef>
#include <span>
#include <string_view>

namespace hilbmap::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
};

const KernelTable& scalar_kernels();
// Only meaningful when isa_available(Isa::avx2).
const KernelTable& avx2_kernels();

bool isa_available(Isa isa);

// Selected once at first use: the best available ISA, unless the environment
// variable HILBMAP_SIMD=scalar forces the reference path.
const KernelTable& active();

// Overrides the selection (tests and benchmarks). Throws if unavailable.
void force(Isa isa);

std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double dot3(std::span<const double> a, std::span<const double> b,
                   std::span<const double> c) {
  return active().dot3(a.data(), b.data(), c.data(), a.size());
}

}  // namespace hilbmap::simd
