#include <cmath>

#include "hilbmap/kernels.hpp"

namespace hilbmap::simd {
namespace {

inline double fold(const double (&acc)[8]) {
  const double t0 = acc[0] + acc[4];
  const double t1 = acc[1] + acc[5];
  const double t2 = acc[2] + acc[6];
  const double t3 = acc[3] + acc[7];
  return (t0 + t2) + (t1 + t3);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc[8] = {};
  const std::size_t blocks = n / 8 * 8;
  for (std::size_t i = 0; i < blocks; i += 8)
    for (int l = 0; l < 8; ++l) acc[l] = std::fma(a[i + l], b[i + l], acc[l]);
  double s = fold(acc);
  for (std::size_t i = blocks; i < n; ++i) s = std::fma(a[i], b[i], s);
  return s;
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
  double acc[8] = {};
  const std::size_t blocks = n / 8 * 8;
  for (std::size_t i = 0; i < blocks; i += 8)
    for (int l = 0; l < 8; ++l) acc[l] = std::fma(a[i + l] * b[i + l], c[i + l], acc[l]);
  double s = fold(acc);
  for (std::size_t i = blocks; i < n; ++i) s = std::fma(a[i] * b[i], c[i], s);
  return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, &dot_scalar, &dot3_scalar};
  return table;
}

}  // namespace hilbmap::simd
