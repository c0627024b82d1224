#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

// Legendre machinery on the unit interval, u = 2x - 1.
namespace hilbmap::legendre {

// P_0..P_{count-1} at u = 2x - 1 (standard normalization, P_n(1) = 1).
std::vector<double> values(int count, double x);

// Row j holds P_0..P_{count-1} at nodes[j].
Eigen::MatrixXd table(int count, std::span<const double> nodes);

// sum_n c_n P_n(2x - 1), Clenshaw.
double series(std::span<const double> coeffs, double x);

// sum_n -n(n+1) c_n P_n(2x - 1): the operator d/dx (x(1-x) d/dx) applied to the series.
double series_operator(std::span<const double> coeffs, double x);

// Samples at the Gauss–Legendre nodes of size n -> coefficients c_0..c_{n-1}.
// Exact inverse of sampling for polynomials of degree < n.
std::vector<double> coefficients_from_samples(std::span<const double> samples);

// Associated Legendre profiles Pbar_l^mu(2x - 1) for l = mu..l_max, scaled to be
// orthonormal on [0, 1] with respect to dx (no Condon–Shortley phase).
// Result[i] corresponds to l = mu + i.
std::vector<double> associated_unit(int l_max, int mu, double x);

}  // namespace hilbmap::legendre
