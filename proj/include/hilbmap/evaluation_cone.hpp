#pragma once

#include <span>
#include <vector>

#include "hilbmap/hermitian.hpp"
#include "hilbmap/hilbert_map.hpp"
#include "hilbmap/sphere.hpp"

namespace hilbmap {

// <s_a, s_b>_{P(x)} = (s_a(x), s_b(x))_h for h = h_FS e^{-reference}; rank one.
HermitianForm point_gram(const MetricPotential& reference, const PolarizedModel& model, const Point& p);

// Same matrix assembled from frame values and the metric in one chart
// (the point at infinity only has the w-chart, the origin only the z-chart).
HermitianForm point_gram_in_chart(const MetricPotential& reference, const PolarizedModel& model,
                                  const Point& p, Chart chart);

// 32 Gauss–Legendre radial nodes times 4k + 8 angles, plus both poles.
std::vector<Point> default_cone_points(const PolarizedModel& model);
// count equally spaced points on |z| = radius.
std::vector<Point> circle_points(int count, double radius = 1.0);

struct ConeFit {
  std::vector<Point> points;
  std::vector<double> weights;
  HermitianForm reconstruction;
  double residual = 0.0;  // ||sum_i a_i P(x_i) - G||_F
  MetricPotential reference;
};

// Best nonnegative combination of the P(x_i), by NNLS on the real vectorization.
ConeFit cone_fit(const HermitianForm& target, std::span<const Point> points,
                 const MetricPotential& reference, const PolarizedModel& model);

// Residual recomputed from the points and weights alone.
double recompute_residual(const ConeFit& fit, const HermitianForm& target, const PolarizedModel& model);

// Discrete measure from the product rule at radial density d (angular count of
// reference_rule) whose P-combination approximates hilb(phi) computed on reference_rule.
ConeFit approximate_hilb_by_points(const MetricPotential& phi, const PolarizedModel& model, int density,
                                   const QuadratureRule& reference_rule);

struct HIndependenceReport {
  ConeFit under_first;
  ConeFit under_second;
  bool classification_agrees = false;
  // max over the common support of |a2 / (a1 e^{psi(x_i)}) - 1|, psi = phi2 - phi1.
  double weight_transform_error = 0.0;
  int common_support = 0;
};

HIndependenceReport h_independence_check(const HermitianForm& target, std::span<const Point> points,
                                         const MetricPotential& first, const MetricPotential& second,
                                         const PolarizedModel& model, double tol);

}  // namespace hilbmap
