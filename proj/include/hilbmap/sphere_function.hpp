#pragma once

#include <span>
#include <vector>

#include "hilbmap/quadrature.hpp"

namespace hilbmap {

// One non-radial term Pbar_l^mu(2x-1) (c cos(mu theta) + s sin(mu theta)), mu >= 1.
// Pbar is orthonormal on [0, 1] (see legendre::associated_unit).
struct Harmonic {
  int degree = 1;
  int order = 1;
  double cos_coef = 0.0;
  double sin_coef = 0.0;
};

// Values of a function and of its round Laplacian-type operator
//   L f = d/dx (x(1-x) f_x) + f_theta_theta / (4 x (1-x))
// on the nodes of a product rule, row-major [radial][angular].
struct GridSamples {
  int radial_count = 0;
  int angular_count = 0;
  std::vector<double> value;
  std::vector<double> op;

  double at(int j, int l) const { return value[static_cast<std::size_t>(j) * angular_count + l]; }
  double op_at(int j, int l) const { return op[static_cast<std::size_t>(j) * angular_count + l]; }
};

// Same, for the radial part only on a set of radial nodes.
struct RadialSamples {
  std::vector<double> value;
  std::vector<double> op;
};

// Real function on CP^1 in the compactified coordinates (x, theta),
// x = |z|^2 / (1 + |z|^2). The radial part is a Legendre series in u = 2x - 1;
// non-radial parts are associated Legendre profiles times Fourier modes.
// In these coordinates L is diagonal: -l(l+1) on every degree-l term.
class SphereFunction {
 public:
  SphereFunction() = default;

  static SphereFunction constant(double c);
  static SphereFunction from_radial_coefficients(std::vector<double> coeffs);
  // Samples at the Gauss–Legendre nodes of size samples.size().
  static SphereFunction from_radial_samples(std::span<const double> samples);
  template <class F>
  static SphereFunction from_radial(F&& f, int n) {
    const auto& rule = gauss_legendre_unit(n);
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = f(rule.nodes[j]);
    return from_radial_samples(s);
  }
  static SphereFunction harmonic(int degree, int order, double cos_coef, double sin_coef = 0.0);

  bool is_radial() const { return harmonics_.empty(); }
  const std::vector<double>& radial_coefficients() const { return radial_; }
  const std::vector<Harmonic>& harmonics() const { return harmonics_; }
  int max_order() const;

  double value(double x, double theta) const;
  double op(double x, double theta) const;
  // Limits at the poles are the radial series at x = 0, 1 (harmonics vanish there).
  double radial_value(double x) const;

  RadialSamples radial_on(std::span<const double> nodes) const;
  GridSamples on_grid(const QuadratureRule& rule) const;

  SphereFunction& operator+=(const SphereFunction& other);
  SphereFunction& operator*=(double c);
  friend SphereFunction operator+(SphereFunction a, const SphereFunction& b) { return a += b; }
  friend SphereFunction operator*(double c, SphereFunction a) { return a *= c; }
  friend SphereFunction operator-(SphereFunction a, const SphereFunction& b) {
    return a += (-1.0) * b;
  }

 private:
  void add_harmonic(const Harmonic& h);

  std::vector<double> radial_;
  std::vector<Harmonic> harmonics_;
};

}  // namespace hilbmap
