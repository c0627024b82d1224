#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hilbmap/hermitian.hpp"
#include "hilbmap/hilbert_map.hpp"
#include "hilbmap/quadrature.hpp"
#include "hilbmap/sphere.hpp"
#include "hilbmap/sphere_function.hpp"

// Derivative of the Hilbert map. Under the convention fixed by
//   d/dt hilb(phi + t psi) |_{t=0} = integral (s_a, s_b)_h (Delta psi - psi) omega_phi,
// Delta psi = ((i/2) d dbar psi) / omega_phi = (L psi / k) / MA(phi): a nonpositive
// operator whose round-metric spectrum is -l(l+1)/k.
namespace hilbmap {

// Finite family of real test functions on CP^1.
struct FunctionBasis {
  std::vector<SphereFunction> functions;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(functions.size()); }

  // Real harmonics Pbar_l^mu cos / sin (mu theta), 0 <= mu <= max_order,
  // mu <= l <= max_degree, ordered by (l, mu, cos before sin); truncated to limit.
  static FunctionBasis real_harmonics(int max_degree, int max_order, int limit = -1);
  // Eight profiles per Fourier mode (l <= 7 + mu is cut at l <= 7 + 2k), modes mu <= 2k.
  static FunctionBasis defaults(const PolarizedModel& model);
  static FunctionBasis constants();

  // Smallest eigenvalue of the L^2(omega_FS) Gram of the functions.
  double gram_min_eigenvalue(const QuadratureRule& rule) const;
};

HermitianForm tangent_map(const MetricPotential& phi, const SphereFunction& psi, const PolarizedModel& model,
                          const QuadratureRule& rule, const SectionFamily* family = nullptr);

struct SpectrumEntry {
  int mode;   // Fourier order mu (each mu >= 1 eigenvalue occurs twice: cos and sin)
  int index;  // 0-based within the mode, by increasing |eigenvalue|
  double eigenvalue;
};

struct Spectrum {
  std::vector<SpectrumEntry> entries;  // sorted by increasing |eigenvalue|
  double distance_to_one = 0.0;        // min |lambda - 1|
  double refinement_shift = 0.0;       // max change of the reported eigenvalues, basis doubled
  int basis_size = 0;

  // Distinct eigenvalues of mode 0 (the l-ladder): index 1 and 2 give lambda_1, lambda_2.
  std::vector<double> mode(int mu) const;
};

// Galerkin discretization of Delta_phi on each Fourier mode mu <= mu_max in
// associated Legendre profiles; keeps degrees l <= l_max. Throws SolverFailure
// when the refinement shift exceeds 1e-6.
Spectrum laplacian_spectrum(const MetricPotential& phi, const PolarizedModel& model, int l_max, int mu_max,
                            int basis_size = 0);

struct TangentRank {
  int rank = 0;
  std::vector<double> singular_values;
};

// Rank of psi |-> tangent_map(phi, psi) on the basis, threshold sigma_max * 1e-10.
TangentRank tangent_rank(const MetricPotential& phi, const FunctionBasis& basis, const PolarizedModel& model,
                         const QuadratureRule& rule, const SectionFamily* family = nullptr);

// Smallest eigenvalue of the L^2(omega_phi) Gram of the real functions
// Re/Im (s_i, s_j)_h, i <= j, over the family (monomials by default).
double products_independence(const MetricPotential& phi, const PolarizedModel& model, const QuadratureRule& rule,
                             const SectionFamily* family = nullptr);

struct InversionOptions {
  int max_iterations = 30;
  double tol = 1e-8;
  double tikhonov = 1e-12;
  std::optional<FunctionBasis> basis;  // FunctionBasis::defaults when absent
};

struct Inversion {
  MetricPotential phi;
  std::vector<double> residual_history;  // Frobenius, initial iterate first
  int iterations = 0;
  double residual = 0.0;
};

// Gauss–Newton on phi = phi0 + sum_n c_n psi_n with tangent_map as Jacobian,
// Tikhonov-regularized least squares and halving line search. Throws
// SolverFailure (carrying the history) on stall or iteration cap.
Inversion invert_hilbert(const HermitianForm& target, const SectionFamily& family, const MetricPotential& phi0,
                         const PolarizedModel& model, const QuadratureRule& rule,
                         const InversionOptions& options = {});

// Pull-back of h_FS by z -> lambda z: phi_lambda(x) = k log(1 + (lambda^2 - 1) x).
// Its Gram over {1, z^k} has ratio G_00 / G_kk = lambda^{2k}.
MetricPotential scaling_potential(const PolarizedModel& model, double lambda);

struct ScalingOracle {
  double lambda = 1.0;
  double ratio = 1.0;  // G_00 / G_kk of hilb(phi_lambda) over {1, z^k}
  int steps = 0;
};

// Bisection in log lambda for G_00 / G_kk = ratio, with the Gram computed by quadrature.
ScalingOracle scaling_ratio_oracle(const PolarizedModel& model, double ratio, const QuadratureRule& rule,
                                   double rel_tol = 1e-12);

}  // namespace hilbmap
