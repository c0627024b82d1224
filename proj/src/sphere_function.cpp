#include "hilbmap/sphere_function.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "hilbmap/legendre.hpp"

namespace hilbmap {

SphereFunction SphereFunction::constant(double c) { return from_radial_coefficients({c}); }

SphereFunction SphereFunction::from_radial_coefficients(std::vector<double> coeffs) {
  SphereFunction f;
  f.radial_ = std::move(coeffs);
  return f;
}

SphereFunction SphereFunction::from_radial_samples(std::span<const double> samples) {
  return from_radial_coefficients(legendre::coefficients_from_samples(samples));
}

SphereFunction SphereFunction::harmonic(int degree, int order, double cos_coef, double sin_coef) {
  if (order < 0 || degree < order)
    throw std::invalid_argument("harmonic needs 0 <= order <= degree");
  SphereFunction f;
  f.add_harmonic({degree, order, cos_coef, sin_coef});
  return f;
}

void SphereFunction::add_harmonic(const Harmonic& h) {
  if (h.order < 0 || h.degree < h.order)
    throw std::invalid_argument("harmonic needs 0 <= order <= degree");
  if (h.order == 0) {
    // Pbar_l^0 = sqrt(2l+1) P_l on the unit interval; sin(0) drops out.
    if (static_cast<int>(radial_.size()) <= h.degree) radial_.resize(h.degree + 1, 0.0);
    radial_[h.degree] += std::sqrt(2.0 * h.degree + 1.0) * h.cos_coef;
    return;
  }
  for (auto& existing : harmonics_) {
    if (existing.degree == h.degree && existing.order == h.order) {
      existing.cos_coef += h.cos_coef;
      existing.sin_coef += h.sin_coef;
      return;
    }
  }
  harmonics_.push_back(h);
  std::sort(harmonics_.begin(), harmonics_.end(), [](const Harmonic& a, const Harmonic& b) {
    return std::pair(a.order, a.degree) < std::pair(b.order, b.degree);
  });
}

int SphereFunction::max_order() const {
  int m = 0;
  for (const auto& h : harmonics_) m = std::max(m, h.order);
  return m;
}

double SphereFunction::radial_value(double x) const { return legendre::series(radial_, x); }

double SphereFunction::value(double x, double theta) const {
  double v = legendre::series(radial_, x);
  for (const auto& h : harmonics_) {
    const double p = legendre::associated_unit(h.degree, h.order, x).back();
    v += p * (h.cos_coef * std::cos(h.order * theta) + h.sin_coef * std::sin(h.order * theta));
  }
  return v;
}

double SphereFunction::op(double x, double theta) const {
  double v = legendre::series_operator(radial_, x);
  for (const auto& h : harmonics_) {
    const double p = legendre::associated_unit(h.degree, h.order, x).back();
    const double lam = -static_cast<double>(h.degree) * (h.degree + 1);
    v += lam * p *
         (h.cos_coef * std::cos(h.order * theta) + h.sin_coef * std::sin(h.order * theta));
  }
  return v;
}

RadialSamples SphereFunction::radial_on(std::span<const double> nodes) const {
  RadialSamples out;
  out.value.resize(nodes.size());
  out.op.resize(nodes.size());
  const int count = static_cast<int>(radial_.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const auto p = legendre::values(count, nodes[j]);
    double v = 0.0, o = 0.0;
    for (int n = 0; n < count; ++n) {
      v += radial_[n] * p[n];
      o -= static_cast<double>(n) * (n + 1) * radial_[n] * p[n];
    }
    out.value[j] = v;
    out.op[j] = o;
  }
  return out;
}

GridSamples SphereFunction::on_grid(const QuadratureRule& rule) const {
  GridSamples g;
  g.radial_count = rule.radial_count();
  g.angular_count = rule.angular_count();
  const std::size_t total = static_cast<std::size_t>(g.radial_count) * g.angular_count;
  g.value.assign(total, 0.0);
  g.op.assign(total, 0.0);
  const auto& nodes = rule.radial().nodes;
  const auto radial = radial_on(nodes);

  // Group harmonics by order so each profile table is built once per node.
  std::map<int, std::vector<const Harmonic*>> by_order;
  int max_degree = 0;
  for (const auto& h : harmonics_) {
    by_order[h.order].push_back(&h);
    max_degree = std::max(max_degree, h.degree);
  }
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> trig;
  for (const auto& [order, list] : by_order) {
    auto& [c, s] = trig[order];
    c.resize(g.angular_count);
    s.resize(g.angular_count);
    for (int l = 0; l < g.angular_count; ++l) {
      c[l] = std::cos(order * rule.angles()[l]);
      s[l] = std::sin(order * rule.angles()[l]);
    }
  }

  for (int j = 0; j < g.radial_count; ++j) {
    double* val = g.value.data() + static_cast<std::size_t>(j) * g.angular_count;
    double* op = g.op.data() + static_cast<std::size_t>(j) * g.angular_count;
    for (int l = 0; l < g.angular_count; ++l) {
      val[l] = radial.value[j];
      op[l] = radial.op[j];
    }
    for (const auto& [order, list] : by_order) {
      const auto prof = legendre::associated_unit(max_degree, order, nodes[j]);
      const auto& [c, s] = trig.at(order);
      for (const Harmonic* h : list) {
        const double p = prof[h->degree - order];
        const double lam = -static_cast<double>(h->degree) * (h->degree + 1);
        for (int l = 0; l < g.angular_count; ++l) {
          const double t = p * (h->cos_coef * c[l] + h->sin_coef * s[l]);
          val[l] += t;
          op[l] += lam * t;
        }
      }
    }
  }
  return g;
}

SphereFunction& SphereFunction::operator+=(const SphereFunction& other) {
  if (radial_.size() < other.radial_.size()) radial_.resize(other.radial_.size(), 0.0);
  for (std::size_t n = 0; n < other.radial_.size(); ++n) radial_[n] += other.radial_[n];
  for (const auto& h : other.harmonics_) add_harmonic(h);
  return *this;
}

SphereFunction& SphereFunction::operator*=(double c) {
  for (double& v : radial_) v *= c;
  for (auto& h : harmonics_) {
    h.cos_coef *= c;
    h.sin_coef *= c;
  }
  return *this;
}

}  // namespace hilbmap
