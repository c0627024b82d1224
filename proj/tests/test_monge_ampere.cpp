#include <cmath>
#include <random>

#include "doctest.h"
#include "hilbmap/errors.hpp"
#include "hilbmap/hilbert_map.hpp"
#include "hilbmap/monge_ampere.hpp"

using namespace hilbmap;

namespace {

// phi* = c x (1 - x) has L phi* = d/dx (x(1-x)(c - 2cx)) = c (1 - 6x + 6x^2),
// so MA = 1 + c (1 - 6x + 6x^2) / k in closed form.
double analytic_ma(double c, int k, double x) { return 1.0 + c * (1.0 - 6.0 * x + 6.0 * x * x) / k; }

RadialFunction manufactured_rhs(double c, int k, int n) {
  const auto& r = gauss_legendre_unit(n);
  RadialFunction f{std::vector<double>(n)};
  for (int j = 0; j < n; ++j) {
    const double x = r.nodes[j];
    f.samples[j] = std::log(analytic_ma(c, k, x)) - c * x * (1 - x);
  }
  return f;
}

}  // namespace

TEST_CASE("ma_density") {
  const PolarizedModel model(2);
  for (double v : ma_density(MetricPotential::zero(), model, 64).samples) CHECK(v == doctest::Approx(1.0));
  const MetricPotential c(SphereFunction::constant(3.0));
  for (double v : ma_density(c, model, 64).samples) CHECK(v == doctest::Approx(1.0));
  const double coef = 0.7;
  const MetricPotential phi(SphereFunction::from_radial([&](double x) { return coef * x * (1 - x); }, 6));
  const RadialFunction ma = ma_density(phi, model, 64);
  const auto& nodes = gauss_legendre_unit(64).nodes;
  for (int j = 0; j < 64; ++j) CHECK(std::abs(ma.samples[j] - analytic_ma(coef, 2, nodes[j])) < 1e-13);
  // Total mass is the area k pi.
  CHECK(std::abs(ma.integral(model) - 2 * M_PI) < 1e-9);
  // Collocation matrix agrees with the series operator.
  const Eigen::MatrixXd& d = radial_operator_matrix(64);
  Eigen::VectorXd v(64);
  for (int j = 0; j < 64; ++j) v(j) = coef * nodes[j] * (1 - nodes[j]);
  const Eigen::VectorXd dv = d * v;
  for (int j = 0; j < 64; ++j) CHECK(std::abs(dv(j) - coef * (1 - 6 * nodes[j] + 6 * nodes[j] * nodes[j])) < 1e-10);
  CHECK_THROWS_AS(ma_density(MetricPotential(SphereFunction::from_radial([](double x) { return 5 * x * x; }, 4)),
                             PolarizedModel(1), 32),
                  NotAdmissible);
}

TEST_CASE("trivial right-hand sides") {
  const PolarizedModel model(1);
  const RadialFunction zero{std::vector<double>(128, 0.0)};
  const MaSolution s0 = solve_ma(zero, model);
  CHECK(s0.iterations == 0);
  for (double v : s0.samples) CHECK(std::abs(v) <= 1e-10);
  const RadialFunction c{std::vector<double>(128, 0.8)};
  const MaSolution sc = solve_ma(c, model);
  for (double v : sc.samples) CHECK(std::abs(v + 0.8) <= 1e-10);
  CHECK(sc.residual <= 1e-10);
}

TEST_CASE("manufactured solution") {
  for (int k : {1, 2, 3}) {
    const RadialFunction f = manufactured_rhs(0.3, k, 256);
    const MaSolution sol = solve_ma(f, PolarizedModel(k));
    const auto& nodes = f.rule().nodes;
    double err = 0.0;
    for (int j = 0; j < 256; ++j) err = std::max(err, std::abs(sol.samples[j] - 0.3 * nodes[j] * (1 - nodes[j])));
    CHECK(err <= 1e-9);
    CHECK(sol.residual <= 1e-10);
    CHECK(ma_residual(sol.phi, f, PolarizedModel(k)) <= 1e-9);
    // Residual history decreases.
    for (std::size_t i = 1; i < sol.residual_history.size(); ++i)
      CHECK(sol.residual_history[i] < sol.residual_history[i - 1]);
  }
}

TEST_CASE("uniqueness from two initial guesses") {
  const PolarizedModel model(2);
  const RadialFunction f = manufactured_rhs(-0.5, 2, 128);
  MaOptions a, b;
  b.initial = MetricPotential(SphereFunction::from_radial([](double x) { return 0.2 * std::cos(3 * x); }, 32));
  const MaSolution sa = solve_ma(f, model, a), sb = solve_ma(f, model, b);
  double diff = 0.0;
  for (int j = 0; j < 128; ++j) diff = std::max(diff, std::abs(sa.samples[j] - sb.samples[j]));
  CHECK(diff <= 1e-9);
}

TEST_CASE("mass identity: integral e^{-phi} MA = integral e^{f}") {
  const PolarizedModel model(1);
  const RadialFunction f = manufactured_rhs(0.3, 1, 128);
  const MaSolution sol = solve_ma(f, model);
  const RadialFunction ma = ma_density(sol.phi, model, 128);
  RadialFunction lhs{std::vector<double>(128)}, rhs{std::vector<double>(128)};
  for (int j = 0; j < 128; ++j) {
    lhs.samples[j] = std::exp(-sol.samples[j]) * ma.samples[j];
    rhs.samples[j] = std::exp(f.samples[j]);
  }
  CHECK(std::abs(lhs.integral(model) - rhs.integral(model)) <= 1e-8);
}

TEST_CASE("solver failures are reported, never silent") {
  const PolarizedModel model(1);
  RadialFunction f = manufactured_rhs(0.3, 1, 64);
  MaOptions o;
  o.max_iterations = 1;
  try {
    solve_ma(f, model, o);
    FAIL("expected SolverFailure");
  } catch (const SolverFailure& e) {
    CHECK(e.history.size() == 2);
  }
  o = {};
  o.tol = 1e-30;
  CHECK_THROWS_AS(solve_ma(f, model, o), SolverFailure);
  o = {};
  o.tol = -1.0;
  CHECK_THROWS(solve_ma(f, model, o));
}

TEST_CASE("convex_combination_f") {
  const PolarizedModel model(1);
  const MetricPotential p0(SphereFunction::from_radial([](double x) { return 0.2 * x; }, 4));
  const MetricPotential p1(SphereFunction::from_radial([](double x) { return -0.3 * x * x; }, 4));
  const int n = 64;
  const auto f0 = convex_combination_f(p0, p1, 0.0, model, n);
  const auto f1 = convex_combination_f(p0, p1, 1.0, model, n);
  const auto ma0 = ma_density(p0, model, n), ma1 = ma_density(p1, model, n);
  const auto& nodes = gauss_legendre_unit(n).nodes;
  for (int j = 0; j < n; ++j) {
    CHECK(f0.samples[j] == doctest::Approx(std::log(ma0.samples[j]) - 0.2 * nodes[j]).epsilon(1e-13));
    CHECK(f1.samples[j] == doctest::Approx(std::log(ma1.samples[j]) + 0.3 * nodes[j] * nodes[j]).epsilon(1e-13));
  }
  const auto a = convex_combination_f(p0, p0, 0.2, model, n), b = convex_combination_f(p0, p0, 0.9, model, n);
  for (int j = 0; j < n; ++j) CHECK(a.samples[j] == doctest::Approx(b.samples[j]).epsilon(1e-14));
  CHECK_THROWS(convex_combination_f(p0, p1, 1.5, model, n));
}

TEST_CASE("bump densities") {
  const PolarizedModel model(1);
  for (double eps : {0.5, 0.2, 0.1, 0.05}) {
    for (const Point& p : {Point::at(0.0), Point::infinity()}) {
      const BumpDensity b = bump_density(model, p, eps, bump_grid_size(eps));
      CHECK(std::abs(b.mass - 1.0) <= 1e-10);
      CHECK(std::abs(b.density.integral(model) - 1.0) <= 1e-10);
      CHECK(b.concentration >= 1.0 - eps);
      CHECK(b.nodes_inside >= 12);
      for (double v : b.density.samples) CHECK(v > 0.0);
    }
  }
  CHECK_THROWS(bump_density(model, Point::at(0.0), 0.0, 256));
  CHECK_THROWS(bump_density(model, Point::at(0.0), 0.6, 256));
  CHECK_THROWS(bump_density(model, Point::at(1.0), 0.1, 256));
}

TEST_CASE("bump solves give Grams approaching the point evaluation") {
  const PolarizedModel model(1);
  const SectionFamily v = SectionFamily::monomials(1);
  double previous = 1.0;
  for (double eps : {0.2, 0.1, 0.05}) {
    const int n = bump_grid_size(eps);
    const BumpDensity b = bump_density(model, Point::at(0.0), eps, n);
    MaOptions o;
    o.tol = 1e-8;
    const MaSolution sol = solve_ma(b.log_density, model, o);
    const HermitianForm g = hilb(sol.phi, model, QuadratureRule(n, 12), &v);
    // For k = 1 the trace is the total mass: (|1|^2 + |z|^2) h_FS = 1.
    CHECK(g.trace() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(g(1, 1).real() < previous);
    previous = g(1, 1).real();
  }
  CHECK(previous < 0.05);
}
