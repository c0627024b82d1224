#include "hilbmap/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hilbmap/errors.hpp"
#include "hilbmap/legendre.hpp"

namespace hilbmap {
namespace {

// Full product-grid samples (radial functions broadcast along theta).
GridSamples grid_of(const SphereFunction& f, const QuadratureRule& rule) { return f.on_grid(rule); }

std::vector<double> gram_density(const PolarizedModel& model, const QuadratureRule& rule, const GridSamples& phi) {
  const auto& nodes = rule.radial().nodes;
  std::vector<double> out(phi.value.size());
  for (int j = 0; j < phi.radial_count; ++j)
    for (int l = 0; l < phi.angular_count; ++l) {
      const std::size_t i = static_cast<std::size_t>(j) * phi.angular_count + l;
      const double ma = 1.0 + phi.op[i] / model.k;
      if (!(ma > 0.0)) throw NotAdmissible(Point::from_polar(nodes[j], rule.angles()[l]), ma);
      out[i] = std::exp(-phi.value[i]) * ma;
    }
  return out;
}

// e^{-phi} (L psi / k - psi MA(phi)) on the grid.
std::vector<double> tangent_density(const PolarizedModel& model, const GridSamples& phi, const GridSamples& psi) {
  std::vector<double> out(phi.value.size());
  const double k = model.k;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double ma = 1.0 + phi.op[i] / k;
    out[i] = std::exp(-phi.value[i]) * (psi.op[i] / k - psi.value[i] * ma);
  }
  return out;
}

HermitianForm transport(const HermitianForm& h, const SectionFamily* family) {
  return family ? h.transported(family->coefficient_matrix()) : h;
}

void axpy(GridSamples& y, double a, const GridSamples& x) {
  for (std::size_t i = 0; i < y.value.size(); ++i) {
    y.value[i] += a * x.value[i];
    y.op[i] += a * x.op[i];
  }
}

}  // namespace

FunctionBasis FunctionBasis::real_harmonics(int max_degree, int max_order, int limit) {
  FunctionBasis b;
  for (int l = 0; l <= max_degree; ++l)
    for (int mu = 0; mu <= std::min(l, max_order); ++mu) {
      if (limit >= 0 && b.size() >= limit) return b;
      if (mu == 0) {
        b.functions.push_back(SphereFunction::harmonic(l, 0, 1.0));
        b.labels.push_back("P" + std::to_string(l));
        continue;
      }
      b.functions.push_back(SphereFunction::harmonic(l, mu, 1.0, 0.0));
      b.labels.push_back("P" + std::to_string(l) + "," + std::to_string(mu) + "c");
      if (limit >= 0 && b.size() >= limit) return b;
      b.functions.push_back(SphereFunction::harmonic(l, mu, 0.0, 1.0));
      b.labels.push_back("P" + std::to_string(l) + "," + std::to_string(mu) + "s");
    }
  return b;
}

FunctionBasis FunctionBasis::defaults(const PolarizedModel& model) {
  return real_harmonics(7 + 2 * model.k, 2 * model.k);
}

FunctionBasis FunctionBasis::constants() {
  FunctionBasis b;
  b.functions.push_back(SphereFunction::constant(1.0));
  b.labels.push_back("1");
  return b;
}

double FunctionBasis::gram_min_eigenvalue(const QuadratureRule& rule) const {
  const int n = size();
  if (n == 0) return 0.0;
  std::vector<GridSamples> g;
  g.reserve(n);
  for (const auto& f : functions) g.push_back(grid_of(f, rule));
  const auto& w = rule.radial().weights;
  const int nt = rule.angular_count();
  Eigen::MatrixXd gram(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      double s = 0.0;
      for (int j = 0; j < rule.radial_count(); ++j) {
        double row = 0.0;
        for (int l = 0; l < nt; ++l) row += g[p].at(j, l) * g[q].at(j, l);
        s += w[j] * row;
      }
      gram(p, q) = gram(q, p) = s * rule.angular_weight() / (2.0 * std::numbers::pi);
    }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

HermitianForm tangent_map(const MetricPotential& phi, const SphereFunction& psi, const PolarizedModel& model,
                          const QuadratureRule& rule, const SectionFamily* family) {
  if (phi.is_radial() && psi.is_radial()) {
    const auto& nodes = rule.radial().nodes;
    const RadialSamples p = phi.function().radial_on(nodes);
    const RadialSamples s = psi.radial_on(nodes);
    std::vector<double> density(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double ma = 1.0 + p.op[j] / model.k;
      density[j] = std::exp(-p.value[j]) * (s.op[j] / model.k - s.value[j] * ma);
    }
    return transport(density_gram(model, rule, density), family);
  }
  const GridSamples p = grid_of(phi.function(), rule);
  const GridSamples s = grid_of(psi, rule);
  return transport(density_gram(model, rule, tangent_density(model, p, s)), family);
}

std::vector<double> Spectrum::mode(int mu) const {
  std::vector<std::pair<int, double>> picked;
  for (const auto& e : entries)
    if (e.mode == mu) picked.emplace_back(e.index, e.eigenvalue);
  std::sort(picked.begin(), picked.end());
  std::vector<double> out;
  for (const auto& [i, v] : picked) out.push_back(v);
  return out;
}

namespace {

// Eigenvalues of one Fourier mode, ordered by |lambda|, first `keep` of them.
std::vector<double> mode_eigenvalues(const MetricPotential& phi, const PolarizedModel& model, int mu, int size,
                                     int keep) {
  const int nq = std::max(256, 2 * (mu + size) + 64);
  const auto& rule = gauss_legendre_unit(nq);
  const RadialSamples s = phi.function().radial_on(rule.nodes);
  Eigen::MatrixXd profiles(nq, size);
  for (int j = 0; j < nq; ++j) {
    const auto v = legendre::associated_unit(mu + size - 1, mu, rule.nodes[j]);
    for (int i = 0; i < size; ++i) profiles(j, i) = v[i];
  }
  Eigen::VectorXd weight(nq);
  for (int j = 0; j < nq; ++j) {
    const double ma = 1.0 + s.op[j] / model.k;
    if (!(ma > 0.0)) throw NotAdmissible(Point::from_polar(rule.nodes[j], 0.0), ma);
    weight(j) = rule.weights[j] * ma;
  }
  const Eigen::MatrixXd b = profiles.transpose() * weight.asDiagonal() * profiles;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    const double l = mu + i;
    a(i, i) = -l * (l + 1.0) / model.k;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("generalized eigensolver failed");
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + size);
  std::sort(ev.begin(), ev.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  ev.resize(std::min<std::size_t>(keep, ev.size()));
  return ev;
}

}  // namespace

Spectrum laplacian_spectrum(const MetricPotential& phi, const PolarizedModel& model, int l_max, int mu_max,
                            int basis_size) {
  if (!phi.is_radial()) throw std::invalid_argument("spectrum requires an S^1-invariant potential");
  if (l_max < 0 || mu_max < 0) throw std::invalid_argument("negative degree bound");
  Spectrum out;
  const int size = basis_size > 0 ? basis_size : std::max(32, l_max + 16);
  out.basis_size = size;
  for (int mu = 0; mu <= std::min(mu_max, l_max); ++mu) {
    const int keep = l_max - mu + 1;
    const auto coarse = mode_eigenvalues(phi, model, mu, size, keep);
    const auto fine = mode_eigenvalues(phi, model, mu, 2 * size, keep);
    for (int i = 0; i < keep; ++i) {
      out.refinement_shift = std::max(out.refinement_shift, std::abs(fine[i] - coarse[i]));
      out.entries.push_back({mu, i, fine[i]});
    }
  }
  if (out.refinement_shift > 1e-6)
    throw SolverFailure("Laplacian spectrum not converged (shift " + std::to_string(out.refinement_shift) + ")",
                        {out.refinement_shift});
  std::stable_sort(out.entries.begin(), out.entries.end(), [](const SpectrumEntry& x, const SpectrumEntry& y) {
    return std::abs(x.eigenvalue) < std::abs(y.eigenvalue);
  });
  out.distance_to_one = std::numeric_limits<double>::infinity();
  for (const auto& e : out.entries) out.distance_to_one = std::min(out.distance_to_one, std::abs(e.eigenvalue - 1.0));
  return out;
}

TangentRank tangent_rank(const MetricPotential& phi, const FunctionBasis& basis, const PolarizedModel& model,
                         const QuadratureRule& rule, const SectionFamily* family) {
  const int dim = family ? family->size() : model.m();
  Eigen::MatrixXd j(dim * dim, basis.size());
  for (int n = 0; n < basis.size(); ++n)
    j.col(n) = tangent_map(phi, basis.functions[n], model, rule, family).real_vector();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
  TangentRank out;
  const auto& sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double cut = (sv.size() ? sv(0) : 0.0) * 1e-10;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++out.rank;
  return out;
}

double products_independence(const MetricPotential& phi, const PolarizedModel& model, const QuadratureRule& rule,
                             const SectionFamily* family) {
  const SectionFamily fam = family ? *family : SectionFamily::monomials(model.k);
  const int d = fam.size();
  const int nx = rule.radial_count();
  const int nt = rule.angular_count();
  const GridSamples p = grid_of(phi.function(), rule);
  const int nf = d * d;
  const std::size_t npts = static_cast<std::size_t>(nx) * nt;
  // Function values times sqrt(quadrature weight * MA), so the Gram is F^T F.
  Eigen::MatrixXd f(npts, nf);
  for (int j = 0; j < nx; ++j)
    for (int l = 0; l < nt; ++l) {
      const std::size_t i = static_cast<std::size_t>(j) * nt + l;
      const double x = rule.radial().nodes[j];
      const double th = rule.angles()[l];
      const double ma = 1.0 + p.op[i] / model.k;
      if (!(ma > 0.0)) throw NotAdmissible(Point::from_polar(x, th), ma);
      const double sw = std::sqrt(rule.radial().weights[j] * rule.angular_weight() * 0.5 * model.k * ma);
      const double e = std::exp(-p.value[i]);
      std::vector<cplx> v(d);
      for (int a = 0; a < d; ++a) v[a] = fam[a].normalized_value(x, th);
      int c = 0;
      for (int a = 0; a < d; ++a) {
        f(i, c++) = sw * e * std::norm(v[a]);
        for (int b = a + 1; b < d; ++b) {
          const cplx q = e * v[a] * std::conj(v[b]);
          f(i, c++) = sw * q.real();
          f(i, c++) = sw * q.imag();
        }
      }
    }
  const Eigen::MatrixXd gram = f.transpose() * f;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

Inversion invert_hilbert(const HermitianForm& target, const SectionFamily& family, const MetricPotential& phi0,
                         const PolarizedModel& model, const QuadratureRule& rule, const InversionOptions& options) {
  if (target.dim() != family.size()) throw std::invalid_argument("target dimension differs from the family");
  if (!target.is_positive_definite()) throw std::invalid_argument("target is not positive definite");
  const FunctionBasis basis = options.basis ? *options.basis : FunctionBasis::defaults(model);
  const int nb = basis.size();
  const Eigen::MatrixXcd rows = family.coefficient_matrix();

  const GridSamples base = grid_of(phi0.function(), rule);
  std::vector<GridSamples> psi;
  psi.reserve(nb);
  for (const auto& f : basis.functions) psi.push_back(grid_of(f, rule));

  Eigen::VectorXd c = Eigen::VectorXd::Zero(nb);
  auto fields = [&](const Eigen::VectorXd& coef) {
    GridSamples g = base;
    for (int n = 0; n < nb; ++n)
      if (coef(n) != 0.0) axpy(g, coef(n), psi[n]);
    return g;
  };
  auto residual_of = [&](const GridSamples& g) {
    return (density_gram(model, rule, gram_density(model, rule, g)).transported(rows) - target).real_vector();
  };

  GridSamples current = fields(c);
  Eigen::VectorXd r = residual_of(current);
  Inversion out;
  out.residual_history.push_back(r.norm());

  while (r.norm() > options.tol) {
    if (out.iterations >= options.max_iterations)
      throw SolverFailure("Gauss–Newton inversion hit the iteration cap", out.residual_history);
    Eigen::MatrixXd jac(r.size(), nb);
    for (int n = 0; n < nb; ++n)
      jac.col(n) = density_gram(model, rule, tangent_density(model, current, psi[n])).transported(rows).real_vector();
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const double tau = options.tikhonov * std::max(1.0, normal.diagonal().maxCoeff());
    const Eigen::VectorXd step =
        (normal + tau * Eigen::MatrixXd::Identity(nb, nb)).ldlt().solve(-jac.transpose() * r);

    bool accepted = false;
    for (double alpha = 1.0; alpha > 1e-9; alpha *= 0.5) {
      const Eigen::VectorXd trial = c + alpha * step;
      GridSamples g = fields(trial);
      Eigen::VectorXd rt;
      try {
        rt = residual_of(g);
      } catch (const NotAdmissible&) {
        continue;
      }
      if (rt.norm() < r.norm()) {
        c = trial;
        current = std::move(g);
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) throw SolverFailure("Gauss–Newton inversion stalled", out.residual_history);
    ++out.iterations;
    out.residual_history.push_back(r.norm());
  }

  SphereFunction phi = phi0.function();
  for (int n = 0; n < nb; ++n)
    if (c(n) != 0.0) phi += c(n) * basis.functions[n];
  out.phi = MetricPotential(phi);
  out.residual = r.norm();
  return out;
}

MetricPotential scaling_potential(const PolarizedModel& model, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("scaling factor must be positive");
  const double k = model.k;
  const double c = lambda * lambda - 1.0;
  return MetricPotential(SphereFunction::from_radial([&](double x) { return k * std::log1p(c * x); }, 96));
}

ScalingOracle scaling_ratio_oracle(const PolarizedModel& model, double ratio, const QuadratureRule& rule,
                                   double rel_tol) {
  if (!(ratio > 0.0)) throw std::invalid_argument("ratio must be positive");
  const SectionFamily ends({SectionPoly::monomial(model.k, 0), SectionPoly::monomial(model.k, model.k)});
  auto ratio_at = [&](double log_lambda) {
    const HermitianForm g = hilb(scaling_potential(model, std::exp(log_lambda)), model, rule, &ends);
    return g(0, 0).real() / g(1, 1).real();
  };
  // The ratio is increasing in lambda; bracket in log lambda.
  double lo = -1.0, hi = 1.0;
  while (ratio_at(lo) > ratio) lo *= 2.0;
  while (ratio_at(hi) < ratio) hi *= 2.0;
  ScalingOracle out;
  while (hi - lo > rel_tol && out.steps < 200) {
    const double mid = 0.5 * (lo + hi);
    (ratio_at(mid) < ratio ? lo : hi) = mid;
    ++out.steps;
  }
  out.lambda = std::exp(0.5 * (lo + hi));
  out.ratio = ratio_at(std::log(out.lambda));
  return out;
}

}  // namespace hilbmap
