#include "hilbmap/hilbert_map.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hilbmap/errors.hpp"
#include "hilbmap/evaluation_cone.hpp"
#include "hilbmap/kernels.hpp"

namespace hilbmap {
namespace {

// x^p (1-x)^q with 0^0 = 1.
double power_weight(double x, double p, double q) { return std::pow(x, p) * std::pow(1.0 - x, q); }

}  // namespace

std::vector<double> hilbert_density(const MetricPotential& phi, const PolarizedModel& model,
                                    const QuadratureRule& rule) {
  const auto& nodes = rule.radial().nodes;
  const double k = model.k;
  if (phi.is_radial()) {
    const RadialSamples s = phi.function().radial_on(nodes);
    std::vector<double> out(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double ma = 1.0 + s.op[j] / k;
      if (!(ma > 0.0)) throw NotAdmissible(Point::from_polar(nodes[j], 0.0), ma);
      out[j] = std::exp(-s.value[j]) * ma;
    }
    return out;
  }
  const GridSamples g = phi.function().on_grid(rule);
  std::vector<double> out(g.value.size());
  for (int j = 0; j < g.radial_count; ++j)
    for (int l = 0; l < g.angular_count; ++l) {
      const std::size_t i = static_cast<std::size_t>(j) * g.angular_count + l;
      const double ma = 1.0 + g.op[i] / k;
      if (!(ma > 0.0)) throw NotAdmissible(Point::from_polar(nodes[j], rule.angles()[l]), ma);
      out[i] = std::exp(-g.value[i]) * ma;
    }
  return out;
}

HermitianForm density_gram(const PolarizedModel& model, const QuadratureRule& rule,
                           std::span<const double> density) {
  const int k = model.k;
  const int m = model.m();
  const int nx = rule.radial_count();
  const int nt = rule.angular_count();
  const auto& x = rule.radial().nodes;
  const auto& w = rule.radial().weights;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m, m);
  std::vector<double> profile(nx);

  if (density.size() == static_cast<std::size_t>(nx)) {
    // Radial density: angular integral is 2 pi and only a == b survives.
    for (int a = 0; a < m; ++a) {
      for (int j = 0; j < nx; ++j) profile[j] = power_weight(x[j], a, k - a);
      h(a, a) = std::numbers::pi * k * simd::dot3(w, profile, density);
    }
    return HermitianForm(h);
  }
  if (density.size() != static_cast<std::size_t>(nx) * nt)
    throw std::invalid_argument("density size matches neither the radial nor the product grid");

  // Angular moments C_d(x_j) = sum_l F cos(d theta_l), S_d likewise, d = 0..k.
  std::vector<std::vector<double>> cos_moment(m, std::vector<double>(nx));
  std::vector<std::vector<double>> sin_moment(m, std::vector<double>(nx));
  std::vector<double> ct(nt), st(nt);
  for (int d = 0; d < m; ++d) {
    for (int l = 0; l < nt; ++l) {
      ct[l] = std::cos(d * rule.angles()[l]);
      st[l] = std::sin(d * rule.angles()[l]);
    }
    for (int j = 0; j < nx; ++j) {
      const std::span<const double> row = density.subspan(static_cast<std::size_t>(j) * nt, nt);
      cos_moment[d][j] = simd::dot(row, ct);
      sin_moment[d][j] = simd::dot(row, st);
    }
  }
  const double scale = 0.5 * k * rule.angular_weight();
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const int d = b - a;
      for (int j = 0; j < nx; ++j) profile[j] = std::sqrt(power_weight(x[j], a + b, 2 * k - a - b));
      // integral of e^{i(a-b) theta} F = C_d - i S_d
      const double re = scale * simd::dot3(w, profile, cos_moment[d]);
      const double im = -scale * simd::dot3(w, profile, sin_moment[d]);
      h(a, b) = {re, im};
      h(b, a) = {re, -im};
    }
  return HermitianForm(h);
}

HermitianForm fs_gram(const PolarizedModel& model) {
  const int k = model.k;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(k + 1, k + 1);
  for (int a = 0; a <= k; ++a)
    h(a, a) = k * std::numbers::pi * std::exp(std::lgamma(a + 1.0) + std::lgamma(k - a + 1.0) -
                                               std::lgamma(k + 2.0));
  return HermitianForm(h);
}

HermitianForm hilb(const MetricPotential& phi, const PolarizedModel& model,
                   const QuadratureRule& rule, const SectionFamily* family) {
  const HermitianForm full = density_gram(model, rule, hilbert_density(phi, model, rule));
  if (!family) return full;
  if (family->k() != model.k) throw std::invalid_argument("section family degree differs from model");
  return full.transported(family->coefficient_matrix());
}

RefinedGram hilb_refined(const MetricPotential& phi, const PolarizedModel& model,
                         const QuadratureRule& start, const SectionFamily* family, double rel_tol,
                         int max_doublings) {
  RefinedGram out;
  QuadratureRule rule = start;
  HermitianForm previous = hilb(phi, model, rule, family);
  std::vector<double> deltas;
  for (int i = 0; i < max_doublings; ++i) {
    rule = rule.refined();
    HermitianForm next = hilb(phi, model, rule, family);
    const double delta = max_entry_rel_diff(next, previous);
    out.history.push_back({rule.radial_count(), rule.angular_count(), delta});
    deltas.push_back(delta);
    previous = std::move(next);
    if (delta < rel_tol) {
      out.gram = previous;
      return out;
    }
  }
  throw SolverFailure("Gram quadrature did not converge to " + std::to_string(rel_tol) +
                          " within " + std::to_string(max_doublings) + " doublings",
                      deltas);
}

HermitianForm hilb_from_measure(const PolarizedModel& model, std::span<const Point> points,
                                std::span<const double> weights, const MetricPotential& reference) {
  if (points.size() != weights.size()) throw std::invalid_argument("points and weights differ in length");
  HermitianForm sum = HermitianForm::zero(model.m());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("negative measure weight at " + points[i].describe());
    if (weights[i] == 0.0) continue;
    sum += weights[i] * point_gram(reference, model, points[i]);
  }
  return sum;
}

}  // namespace hilbmap
