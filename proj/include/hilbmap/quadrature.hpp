#pragma once

#include <vector>

namespace hilbmap {

// Gauss–Legendre rule on the compactified radial variable x in [0, 1].
// Nodes ascending, weights sum to 1.
struct RadialRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

// Cached per size; thread safe.
const RadialRule& gauss_legendre_unit(int n);

// Product rule: Gauss–Legendre in x times the uniform trapezoid in theta.
// The angular part integrates e^{i m theta} exactly for |m| < angular_count.
class QuadratureRule {
 public:
  QuadratureRule(int radial_count, int angular_count);

  // N_x = 256, N_theta = 4k + 8.
  static QuadratureRule defaults(int k);

  int radial_count() const { return radial_->size(); }
  int angular_count() const { return static_cast<int>(angles_.size()); }
  const RadialRule& radial() const { return *radial_; }
  const std::vector<double>& angles() const { return angles_; }
  double angular_weight() const { return angular_weight_; }

  QuadratureRule refined() const { return {2 * radial_count(), 2 * angular_count()}; }

 private:
  const RadialRule* radial_;
  std::vector<double> angles_;
  double angular_weight_;
};

}  // namespace hilbmap
