#include "hilbmap/legendre.hpp"

#include <cmath>
#include <stdexcept>

#include "hilbmap/quadrature.hpp"

namespace hilbmap::legendre {

std::vector<double> values(int count, double x) {
  std::vector<double> p(std::max(count, 0));
  const double u = 2.0 * x - 1.0;
  if (count > 0) p[0] = 1.0;
  if (count > 1) p[1] = u;
  for (int n = 2; n < count; ++n)
    p[n] = ((2.0 * n - 1.0) * u * p[n - 1] - (n - 1.0) * p[n - 2]) / n;
  return p;
}

Eigen::MatrixXd table(int count, std::span<const double> nodes) {
  Eigen::MatrixXd t(static_cast<Eigen::Index>(nodes.size()), count);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const auto p = values(count, nodes[j]);
    for (int n = 0; n < count; ++n) t(static_cast<Eigen::Index>(j), n) = p[n];
  }
  return t;
}

double series(std::span<const double> coeffs, double x) {
  // Clenshaw for P_{n+1} = alpha_n P_n + beta_n P_{n-1}.
  const double u = 2.0 * x - 1.0;
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    const double n = static_cast<double>(i);
    const double alpha = (2.0 * n + 1.0) / (n + 1.0) * u;
    const double beta = -(n + 1.0) / (n + 2.0);
    const double b0 = coeffs[i] + alpha * b1 + beta * b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

double series_operator(std::span<const double> coeffs, double x) {
  const auto p = values(static_cast<int>(coeffs.size()), x);
  double s = 0.0;
  for (std::size_t n = 0; n < coeffs.size(); ++n)
    s -= static_cast<double>(n) * static_cast<double>(n + 1) * coeffs[n] * p[n];
  return s;
}

std::vector<double> coefficients_from_samples(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  const RadialRule& rule = gauss_legendre_unit(n);
  std::vector<double> c(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const auto p = values(n, rule.nodes[j]);
    const double wf = rule.weights[j] * samples[j];
    for (int m = 0; m < n; ++m) c[m] += wf * p[m];
  }
  for (int m = 0; m < n; ++m) c[m] *= 2.0 * m + 1.0;
  return c;
}

std::vector<double> associated_unit(int l_max, int mu, double x) {
  if (mu < 0) throw std::invalid_argument("associated Legendre order must be nonnegative");
  if (l_max < mu) return {};
  const double u = 2.0 * x - 1.0;
  const double s = 2.0 * std::sqrt(std::max(x * (1.0 - x), 0.0));  // sqrt(1 - u^2)
  // Fully normalized on [-1, 1] with du, then scaled by sqrt(2) for dx on [0, 1].
  double pmm = std::sqrt(0.5);
  for (int i = 1; i <= mu; ++i) pmm *= std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * s;
  std::vector<double> out(l_max - mu + 1);
  out[0] = pmm;
  if (l_max > mu) out[1] = std::sqrt(2.0 * mu + 3.0) * u * pmm;
  for (int l = mu + 2; l <= l_max; ++l) {
    const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - mu * mu));
    const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - mu * mu) /
                               (4.0 * (l - 1) * (l - 1) - 1.0));
    out[l - mu] = a * (u * out[l - mu - 1] - b * out[l - mu - 2]);
  }
  for (double& v : out) v *= std::sqrt(2.0);
  return out;
}

}  // namespace hilbmap::legendre
