#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "hilbmap/hermitian.hpp"

namespace testing {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

// Beta integral: kπ · a!(k−a)!/(k+1)!, computed by products (no lgamma).
inline double fs_entry(int k, int a) {
  double r = k * M_PI / (k + 1);
  // a!(k−a)!/k! = 1 / C(k, a)
  double binom = 1.0;
  for (int i = 1; i <= a; ++i) binom = binom * (k - a + i) / i;
  return r / binom;
}

}  // namespace testing
