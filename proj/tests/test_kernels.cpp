#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "hilbmap/kernels.hpp"

using namespace hilbmap::simd;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng) * std::exp2(static_cast<int>(u(rng) * 20));
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("scalar kernel agrees with a long double reference") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 64u, 257u}) {
    const auto a = random_vector(n, rng), b = random_vector(n, rng), c = random_vector(n, rng);
    long double ref2 = 0, ref3 = 0, mag = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ref2 += static_cast<long double>(a[i]) * b[i];
      ref3 += static_cast<long double>(a[i]) * b[i] * c[i];
      mag += std::abs(static_cast<long double>(a[i]) * b[i] * c[i]) + std::abs(static_cast<long double>(a[i]) * b[i]);
    }
    const auto& s = scalar_kernels();
    CHECK(std::abs(s.dot(a.data(), b.data(), n) - ref2) <= 1e-14 * (mag + 1e-300));
    CHECK(std::abs(s.dot3(a.data(), b.data(), c.data(), n) - ref3) <= 1e-14 * (mag + 1e-300));
  }
}

TEST_CASE("avx2 kernels are bit-identical to the scalar reference") {
  if (!isa_available(Isa::avx2)) {
    MESSAGE("AVX2 not available on this machine; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(5);
  const auto& s = scalar_kernels();
  const auto& v = avx2_kernels();
  for (std::size_t n = 0; n <= 67; ++n) {
    for (int rep = 0; rep < 4; ++rep) {
      const auto a = random_vector(n, rng), b = random_vector(n, rng), c = random_vector(n, rng);
      CAPTURE(n);
      CHECK(same_bits(s.dot(a.data(), b.data(), n), v.dot(a.data(), b.data(), n)));
      CHECK(same_bits(s.dot3(a.data(), b.data(), c.data(), n), v.dot3(a.data(), b.data(), c.data(), n)));
    }
  }
  // Unaligned views.
  const auto a = random_vector(131, rng), b = random_vector(131, rng);
  for (std::size_t off = 1; off < 4; ++off)
    CHECK(same_bits(s.dot(a.data() + off, b.data() + off, 120), v.dot(a.data() + off, b.data() + off, 120)));
}

TEST_CASE("forcing a variant switches the active table") {
  force(Isa::scalar);
  CHECK(active().isa == Isa::scalar);
  CHECK(isa_name(Isa::scalar) == "scalar");
  if (isa_available(Isa::avx2)) {
    force(Isa::avx2);
    CHECK(active().isa == Isa::avx2);
  } else {
    CHECK_THROWS(force(Isa::avx2));
  }
}
