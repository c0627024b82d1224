#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hilbmap/hermitian.hpp"
#include "hilbmap/quadrature.hpp"
#include "hilbmap/sphere.hpp"
#include "hilbmap/sphere_function.hpp"

// The Hilbert map h = h_FS e^{-phi} |-> Gram matrix of sections in
//   <s, t> = integral (s, t)_{h_FS} e^{-phi} omega_phi,
// with omega_FS = (k/2) i dz^dz-bar / (1+|z|^2)^2 = (k/2) dx dtheta (area k pi)
// and omega_phi / omega_FS = MA(phi) = 1 + L phi / k.
namespace hilbmap {

class MetricPotential {
 public:
  enum class Kind { radial, general };

  MetricPotential() = default;
  explicit MetricPotential(SphereFunction phi) : phi_(std::move(phi)) {}
  static MetricPotential zero() { return MetricPotential(SphereFunction::constant(0.0)); }

  Kind kind() const { return phi_.is_radial() ? Kind::radial : Kind::general; }
  bool is_radial() const { return phi_.is_radial(); }
  const SphereFunction& function() const { return phi_; }

  double value(double x, double theta) const { return phi_.value(x, theta); }
  double ma_density(int k, double x, double theta) const { return 1.0 + phi_.op(x, theta) / k; }

  MetricPotential plus(const SphereFunction& psi, double t = 1.0) const {
    return MetricPotential(phi_ + t * psi);
  }

 private:
  SphereFunction phi_ = SphereFunction::constant(0.0);
};

// e^{-phi} MA(phi) (the density of the Hilbert measure against omega_FS) on the
// rule's nodes. Radial potentials give one value per radial node; general ones
// give radial_count x angular_count values, row-major. Throws NotAdmissible
// at the first node where MA(phi) <= 0.
std::vector<double> hilbert_density(const MetricPotential& phi, const PolarizedModel& model,
                                    const QuadratureRule& rule);

// Gram of the monomial basis against density * omega_FS. density is either one
// value per radial node (diagonal fast path) or a full product-grid sample.
HermitianForm density_gram(const PolarizedModel& model, const QuadratureRule& rule,
                           std::span<const double> density);

// k pi a! (k-a)! / (k+1)! on the diagonal.
HermitianForm fs_gram(const PolarizedModel& model);

// Gram over V (coefficient rows) or over the monomial basis when V is absent.
HermitianForm hilb(const MetricPotential& phi, const PolarizedModel& model,
                   const QuadratureRule& rule, const SectionFamily* family = nullptr);

struct RefinementRow {
  int radial_count;
  int angular_count;
  double max_entry_delta;  // relative to the largest entry
};

struct RefinedGram {
  HermitianForm gram;
  std::vector<RefinementRow> history;
};

// Doubles (N_x, N_theta) until the relative change drops below rel_tol.
// Throws SolverFailure when max_doublings is exhausted.
RefinedGram hilb_refined(const MetricPotential& phi, const PolarizedModel& model,
                         const QuadratureRule& start, const SectionFamily* family = nullptr,
                         double rel_tol = 1e-10, int max_doublings = 4);

// sum_i weight_i P(point_i) with P the point-evaluation Gram under h_FS e^{-reference}.
HermitianForm hilb_from_measure(const PolarizedModel& model, std::span<const Point> points,
                                std::span<const double> weights, const MetricPotential& reference);

}  // namespace hilbmap
