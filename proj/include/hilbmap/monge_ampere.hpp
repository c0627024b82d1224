#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hilbmap/hilbert_map.hpp"
#include "hilbmap/quadrature.hpp"
#include "hilbmap/sphere.hpp"

// S^1-invariant Aubin–Yau equation log MA(phi) - phi = f on (CP^1, O(k)).
//
// With s = log|z|^2 and x = e^s / (1 + e^s), a radial potential has
//   MA(phi) = Phi''(s) / Phi_0''(s),  Phi = k log(1 + e^s) + phi,
// which in x reads 1 + (1/k) d/dx (x(1-x) phi_x). The operator d/dx(x(1-x) d/dx)
// is diagonal on Legendre polynomials in 2x - 1, so the discretization is
// Legendre collocation on the Gauss–Legendre nodes of the Hilbert-map rule.
namespace hilbmap {

// Samples at the Gauss–Legendre nodes of size samples.size() on [0, 1].
struct RadialFunction {
  std::vector<double> samples;

  int size() const { return static_cast<int>(samples.size()); }
  const RadialRule& rule() const { return gauss_legendre_unit(size()); }
  // integral over CP^1 against omega_FS: k pi sum_j w_j f_j.
  double integral(const PolarizedModel& model) const;
};

// Collocation matrix of d/dx (x(1-x) d/dx) on n Gauss–Legendre nodes. Cached.
const Eigen::MatrixXd& radial_operator_matrix(int n);

// MA(phi) at the n nodes. Throws NotAdmissible where it is not positive.
RadialFunction ma_density(const MetricPotential& phi, const PolarizedModel& model, int n);

struct MaOptions {
  double tol = 1e-10;
  int max_iterations = 200;
  // Consecutive accepted steps that shrink the residual by less than 0.01%.
  int stagnation_limit = 10;
  std::optional<MetricPotential> initial;
};

struct MaSolution {
  MetricPotential phi;
  std::vector<double> samples;
  std::vector<double> residual_history;  // sup-norm, one entry per iterate
  double residual = 0.0;
  int iterations = 0;
};

// Damped Newton; the linearization is diag(1/(k MA)) D - I. Throws
// SolverFailure with the residual history on stagnation.
MaSolution solve_ma(const RadialFunction& f, const PolarizedModel& model, const MaOptions& options = {});

// sup_j |log MA(phi) - phi - f| at the nodes of f.
double ma_residual(const MetricPotential& phi, const RadialFunction& f, const PolarizedModel& model);

// log(t e^{-phi1} MA(phi1) + (1-t) e^{-phi0} MA(phi0)) at n nodes.
RadialFunction convex_combination_f(const MetricPotential& phi0, const MetricPotential& phi1, double t,
                                    const PolarizedModel& model, int n);

struct BumpDensity {
  RadialFunction density;      // f_eps, positive, unit mass against omega_FS
  RadialFunction log_density;  // right-hand side for solve_ma
  double mass = 0.0;
  double concentration = 0.0;  // mass inside |z| < eps (|w| < eps at infinity)
  double support_x = 0.0;      // x-radius of the disc
  int nodes_inside = 0;
};

// Mixture (1 - eps/2) * normalized (1 - x/x_eps)^4 bump on the disc of radius eps
// around p in {0, infinity} plus eps/2 of the uniform density.
BumpDensity bump_density(const PolarizedModel& model, const Point& p, double eps, int n);

// Smallest of 256, 384, 512, 768, 1024, 1536 with at least min_inside nodes in the disc.
int bump_grid_size(double eps, int min_inside = 12);

}  // namespace hilbmap
