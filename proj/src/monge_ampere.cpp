#include "hilbmap/monge_ampere.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hilbmap/errors.hpp"
#include "hilbmap/legendre.hpp"

namespace hilbmap {
namespace {

Eigen::VectorXd sampled(const MetricPotential& phi, int n) {
  if (!phi.is_radial()) throw std::invalid_argument("radial Monge–Ampère needs a radial potential");
  const auto s = phi.function().radial_on(gauss_legendre_unit(n).nodes);
  return Eigen::Map<const Eigen::VectorXd>(s.value.data(), n);
}

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Returns false (and leaves out untouched) if MA <= 0 at some node.
bool residual_of(const Eigen::MatrixXd& d, const Eigen::VectorXd& phi, const Eigen::VectorXd& f, double k,
                 Eigen::VectorXd& ma, Eigen::VectorXd& out) {
  Eigen::VectorXd m = Eigen::VectorXd::Ones(phi.size()) + (d * phi) / k;
  if ((m.array() <= 0.0).any()) return false;
  out = m.array().log() - phi.array() - f.array();
  ma = std::move(m);
  return true;
}

}  // namespace

double RadialFunction::integral(const PolarizedModel& model) const {
  const auto& w = rule().weights;
  double s = 0.0;
  for (int j = 0; j < size(); ++j) s += w[j] * samples[j];
  return model.k * std::numbers::pi * s;
}

const Eigen::MatrixXd& radial_operator_matrix(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Eigen::MatrixXd>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    const RadialRule& rule = gauss_legendre_unit(n);
    const Eigen::MatrixXd p = legendre::table(n, rule.nodes);  // p(j, m) = P_m(u_j)
    // Coefficients c = T f with T(m, j) = (2m+1) w_j P_m(u_j); D = P diag(-m(m+1)) T.
    Eigen::MatrixXd t = p.transpose();
    for (int m = 0; m < n; ++m) t.row(m) *= 2.0 * m + 1.0;
    for (int j = 0; j < n; ++j) t.col(j) *= rule.weights[j];
    Eigen::VectorXd lam(n);
    for (int m = 0; m < n; ++m) lam(m) = -static_cast<double>(m) * (m + 1);
    slot = std::make_unique<Eigen::MatrixXd>(p * lam.asDiagonal() * t);
  }
  return *slot;
}

RadialFunction ma_density(const MetricPotential& phi, const PolarizedModel& model, int n) {
  if (!phi.is_radial()) throw std::invalid_argument("ma_density: radial potential expected");
  const auto& nodes = gauss_legendre_unit(n).nodes;
  const auto s = phi.function().radial_on(nodes);
  RadialFunction out{std::vector<double>(n)};
  for (int j = 0; j < n; ++j) {
    out.samples[j] = 1.0 + s.op[j] / model.k;
    if (!(out.samples[j] > 0.0)) throw NotAdmissible(Point::from_polar(nodes[j], 0.0), out.samples[j]);
  }
  return out;
}

MaSolution solve_ma(const RadialFunction& f, const PolarizedModel& model, const MaOptions& options) {
  const int n = f.size();
  if (n < 2) throw std::invalid_argument("solve_ma needs at least two nodes");
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_ma tolerance must be positive");
  const double k = model.k;
  const Eigen::MatrixXd& d = radial_operator_matrix(n);
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(f.samples.data(), n);

  Eigen::VectorXd phi = options.initial ? sampled(*options.initial, n) : Eigen::VectorXd::Zero(n);
  Eigen::VectorXd ma, res;
  if (!residual_of(d, phi, rhs, k, ma, res)) {
    const Eigen::VectorXd m = Eigen::VectorXd::Ones(n) + (d * phi) / k;
    Eigen::Index j = 0;
    m.minCoeff(&j);
    throw NotAdmissible(Point::from_polar(f.rule().nodes[j], 0.0), m(j));
  }

  MaSolution sol;
  double norm = sup_norm(res);
  sol.residual_history.push_back(norm);
  int stagnant = 0;
  while (norm > options.tol) {
    if (sol.iterations >= options.max_iterations)
      throw SolverFailure("Monge–Ampère Newton hit the iteration cap at residual " + std::to_string(norm),
                          sol.residual_history);
    Eigen::MatrixXd jac = (ma.cwiseInverse() / k).asDiagonal() * d;
    jac.diagonal().array() -= 1.0;
    const Eigen::VectorXd step = jac.partialPivLu().solve(-res);

    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial_ma, trial_res;
    while (alpha > 1e-12) {
      const Eigen::VectorXd trial = phi + alpha * step;
      if (residual_of(d, trial, rhs, k, trial_ma, trial_res) && sup_norm(trial_res) < norm) {
        phi = trial;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw SolverFailure("Monge–Ampère Newton: no damped step reduces the residual " + std::to_string(norm),
                          sol.residual_history);
    ma = trial_ma;
    res = trial_res;
    const double next = sup_norm(res);
    stagnant = next > (1.0 - 1e-4) * norm ? stagnant + 1 : 0;
    norm = next;
    ++sol.iterations;
    sol.residual_history.push_back(norm);
    if (stagnant >= options.stagnation_limit && norm > options.tol)
      throw SolverFailure("Monge–Ampère Newton stagnated at residual " + std::to_string(norm),
                          sol.residual_history);
  }
  sol.residual = norm;
  sol.samples.assign(phi.data(), phi.data() + n);
  sol.phi = MetricPotential(SphereFunction::from_radial_samples(sol.samples));
  return sol;
}

double ma_residual(const MetricPotential& phi, const RadialFunction& f, const PolarizedModel& model) {
  const RadialFunction ma = ma_density(phi, model, f.size());
  const auto s = phi.function().radial_on(f.rule().nodes);
  double worst = 0.0;
  for (int j = 0; j < f.size(); ++j)
    worst = std::max(worst, std::abs(std::log(ma.samples[j]) - s.value[j] - f.samples[j]));
  return worst;
}

RadialFunction convex_combination_f(const MetricPotential& phi0, const MetricPotential& phi1, double t,
                                    const PolarizedModel& model, int n) {
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("convex combination parameter outside [0, 1]");
  const RadialFunction ma0 = ma_density(phi0, model, n);
  const RadialFunction ma1 = ma_density(phi1, model, n);
  const auto& nodes = gauss_legendre_unit(n).nodes;
  const auto v0 = phi0.function().radial_on(nodes);
  const auto v1 = phi1.function().radial_on(nodes);
  RadialFunction out{std::vector<double>(n)};
  for (int j = 0; j < n; ++j)
    out.samples[j] = std::log(t * std::exp(-v1.value[j]) * ma1.samples[j] +
                              (1.0 - t) * std::exp(-v0.value[j]) * ma0.samples[j]);
  return out;
}

int bump_grid_size(double eps, int min_inside) {
  const double support = eps * eps / (1.0 + eps * eps);
  for (int n : {256, 384, 512, 768, 1024, 1536}) {
    const auto& nodes = gauss_legendre_unit(n).nodes;
    int inside = 0;
    for (double x : nodes) inside += x < support;
    if (inside >= min_inside) return n;
  }
  return 1536;
}

BumpDensity bump_density(const PolarizedModel& model, const Point& p, double eps, int n) {
  if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("bump radius must lie in (0, 1/2]");
  const bool at_origin = !p.is_infinity() && p.z() == 0.0;
  if (!at_origin && !p.is_infinity())
    throw std::invalid_argument("radial bump is centred at 0 or infinity, got " + p.describe());

  const double support = eps * eps / (1.0 + eps * eps);
  const double floor_share = 0.5 * eps;
  const double area = model.k * std::numbers::pi;
  const RadialRule& rule = gauss_legendre_unit(n);

  BumpDensity out;
  out.support_x = support;
  std::vector<double> bump(n, 0.0);
  double bump_mass = 0.0;
  for (int j = 0; j < n; ++j) {
    const double r = (at_origin ? rule.nodes[j] : 1.0 - rule.nodes[j]) / support;
    if (r < 1.0) {
      bump[j] = std::pow(1.0 - r, 4);
      ++out.nodes_inside;
    }
    bump_mass += area * rule.weights[j] * bump[j];
  }
  if (out.nodes_inside == 0)
    throw std::invalid_argument("grid of " + std::to_string(n) + " nodes does not resolve a bump of radius " +
                                std::to_string(eps));

  out.density.samples.resize(n);
  out.log_density.samples.resize(n);
  for (int j = 0; j < n; ++j) {
    const double f = (1.0 - floor_share) * bump[j] / bump_mass + floor_share / area;
    out.density.samples[j] = f;
    out.log_density.samples[j] = std::log(f);
    if (bump[j] > 0.0) out.concentration += area * rule.weights[j] * f;
  }
  out.mass = out.density.integral(model);
  return out;
}

}  // namespace hilbmap
