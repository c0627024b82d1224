#include "hilbmap/evaluation_cone.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hilbmap/nnls.hpp"

namespace hilbmap {
namespace {

double potential_at(const MetricPotential& phi, const Point& p) {
  return phi.value(p.x(), p.theta());
}

}  // namespace

HermitianForm point_gram(const MetricPotential& reference, const PolarizedModel& model, const Point& p) {
  const int k = model.k;
  const double x = p.x();
  const double theta = p.theta();
  const double scale = std::exp(-0.5 * potential_at(reference, p));
  Eigen::VectorXcd v(k + 1);
  for (int a = 0; a <= k; ++a)
    v(a) = std::polar(scale * std::sqrt(std::pow(x, a) * std::pow(1.0 - x, k - a)), a * theta);
  return HermitianForm(v * v.adjoint());
}

HermitianForm point_gram_in_chart(const MetricPotential& reference, const PolarizedModel& model,
                                  const Point& p, Chart chart) {
  const int k = model.k;
  Eigen::VectorXcd frame(k + 1);
  double metric = std::exp(-potential_at(reference, p));
  if (chart == Chart::z) {
    const cplx z = p.z();
    for (int a = 0; a <= k; ++a) frame(a) = std::pow(z, a);
    metric *= std::pow(1.0 + std::norm(z), -k);
  } else {
    const cplx w = p.is_infinity() ? cplx{0.0} : 1.0 / p.z();
    for (int a = 0; a <= k; ++a) frame(a) = std::pow(w, k - a);
    metric *= std::pow(1.0 + std::norm(w), -k);
  }
  return HermitianForm(metric * frame * frame.adjoint());
}

std::vector<Point> default_cone_points(const PolarizedModel& model) {
  const QuadratureRule grid(32, 4 * model.k + 8);
  std::vector<Point> pts{Point::at(0.0)};
  for (double x : grid.radial().nodes)
    for (double theta : grid.angles()) pts.push_back(Point::from_polar(x, theta));
  pts.push_back(Point::infinity());
  return pts;
}

std::vector<Point> circle_points(int count, double radius) {
  std::vector<Point> pts;
  for (int i = 0; i < count; ++i)
    pts.push_back(Point::at(std::polar(radius, 2.0 * std::numbers::pi * i / count)));
  return pts;
}

ConeFit cone_fit(const HermitianForm& target, std::span<const Point> points,
                 const MetricPotential& reference, const PolarizedModel& model) {
  if (points.empty()) throw std::invalid_argument("cone fit needs at least one point");
  if (target.dim() != model.m()) throw std::invalid_argument("cone fit: target dimension mismatch");
  const Eigen::Index rows = static_cast<Eigen::Index>(model.m()) * model.m();
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    a.col(static_cast<Eigen::Index>(i)) = point_gram(reference, model, points[i]).real_vector();
  const NnlsResult sol = nnls(a, target.real_vector());

  ConeFit fit;
  fit.points.assign(points.begin(), points.end());
  fit.weights.assign(sol.x.data(), sol.x.data() + sol.x.size());
  fit.reference = reference;
  fit.reconstruction = hilb_from_measure(model, fit.points, fit.weights, reference);
  fit.residual = (fit.reconstruction - target).frobenius();
  return fit;
}

double recompute_residual(const ConeFit& fit, const HermitianForm& target, const PolarizedModel& model) {
  HermitianForm sum = HermitianForm::zero(model.m());
  for (std::size_t i = 0; i < fit.points.size(); ++i)
    sum += fit.weights[i] * point_gram_in_chart(fit.reference, model, fit.points[i],
                                                fit.points[i].is_infinity() ? Chart::w : Chart::z);
  return (sum - target).frobenius();
}

ConeFit approximate_hilb_by_points(const MetricPotential& phi, const PolarizedModel& model, int density,
                                   const QuadratureRule& reference_rule) {
  const HermitianForm target = hilb(phi, model, reference_rule);
  const QuadratureRule rule(density, reference_rule.angular_count());
  ConeFit fit;
  fit.reference = phi;
  for (int j = 0; j < rule.radial_count(); ++j) {
    const double x = rule.radial().nodes[j];
    for (double theta : rule.angles()) {
      const double ma = phi.ma_density(model.k, x, theta);
      fit.points.push_back(Point::from_polar(x, theta));
      fit.weights.push_back(0.5 * model.k * rule.radial().weights[j] * rule.angular_weight() * ma);
    }
  }
  fit.reconstruction = hilb_from_measure(model, fit.points, fit.weights, phi);
  fit.residual = (fit.reconstruction - target).frobenius();
  return fit;
}

HIndependenceReport h_independence_check(const HermitianForm& target, std::span<const Point> points,
                                         const MetricPotential& first, const MetricPotential& second,
                                         const PolarizedModel& model, double tol) {
  HIndependenceReport r;
  r.under_first = cone_fit(target, points, first, model);
  r.under_second = cone_fit(target, points, second, model);
  r.classification_agrees = (r.under_first.residual <= tol) == (r.under_second.residual <= tol);
  double wmax = 0.0;
  for (double w : r.under_first.weights) wmax = std::max(wmax, w);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double a1 = r.under_first.weights[i];
    const double a2 = r.under_second.weights[i];
    if (a1 <= 1e-12 * wmax || a2 <= 0.0) continue;
    const double psi = potential_at(second, points[i]) - potential_at(first, points[i]);
    r.weight_transform_error = std::max(r.weight_transform_error, std::abs(a2 / (a1 * std::exp(psi)) - 1.0));
    ++r.common_support;
  }
  return r;
}

}  // namespace hilbmap
