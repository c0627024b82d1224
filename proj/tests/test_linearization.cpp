#include <cmath>
#include <random>

#include "doctest.h"
#include "hilbmap/errors.hpp"
#include "hilbmap/linearization.hpp"

using namespace hilbmap;

namespace {

MetricPotential radial_phi() {
  return MetricPotential(SphereFunction::from_radial([](double x) { return 0.3 * x * x - 0.1 * x; }, 6));
}

MetricPotential general_phi() {
  return MetricPotential(radial_phi().function() + SphereFunction::harmonic(2, 1, 0.04, -0.02));
}

SphereFunction test_psi() {
  return SphereFunction::from_radial([](double x) { return std::sin(2 * x); }, 24) +
         SphereFunction::harmonic(2, 1, 0.7, 0.2) + SphereFunction::harmonic(4, 2, -0.3, 0.5);
}

double fd_error(const MetricPotential& phi, const SphereFunction& psi, const PolarizedModel& model,
                const QuadratureRule& rule, double eps) {
  const HermitianForm t = tangent_map(phi, psi, model, rule);
  const HermitianForm d = (1.0 / (2 * eps)) * (hilb(phi.plus(psi, eps), model, rule) - hilb(phi.plus(psi, -eps), model, rule));
  return (d - t).frobenius();
}

}  // namespace

TEST_CASE("tangent map of a constant is minus the Gram") {
  for (int k : {1, 3}) {
    const PolarizedModel model(k);
    const QuadratureRule rule = QuadratureRule::defaults(k);
    for (const MetricPotential& phi : {radial_phi(), general_phi()}) {
      const HermitianForm t = tangent_map(phi, SphereFunction::constant(2.5), model, rule);
      CHECK(max_entry_diff(t, -2.5 * hilb(phi, model, rule)) <= 1e-12);
    }
  }
}

TEST_CASE("tangent map matches central differences at second order") {
  const PolarizedModel model(2);
  const QuadratureRule rule = QuadratureRule::defaults(2);
  for (const MetricPotential& phi : {radial_phi(), general_phi()}) {
    const double e2 = fd_error(phi, test_psi(), model, rule, 1e-2);
    const double e3 = fd_error(phi, test_psi(), model, rule, 1e-3);
    const double order = std::log10(e2 / e3);
    CAPTURE(e2);
    CAPTURE(e3);
    CHECK(order >= 1.9);
  }
}

TEST_CASE("tangent map structure") {
  const PolarizedModel model(3);
  const QuadratureRule rule = QuadratureRule::defaults(3);
  const SphereFunction a = test_psi();
  const SphereFunction b = SphereFunction::harmonic(3, 3, 1.0, -1.0) + SphereFunction::constant(0.2);
  const HermitianForm ta = tangent_map(general_phi(), a, model, rule);
  const HermitianForm tb = tangent_map(general_phi(), b, model, rule);
  const HermitianForm tab = tangent_map(general_phi(), 2.0 * a + (-0.5) * b, model, rule);
  CHECK(max_entry_diff(tab, 2.0 * ta + (-0.5) * tb) <= 1e-11);
  CHECK((ta.entries() - ta.entries().adjoint()).norm() == 0.0);

  // Radial phi, psi = g(x) cos(2 theta): only |a - b| = 2.
  const HermitianForm t2 = tangent_map(radial_phi(), SphereFunction::harmonic(3, 2, 1.0), model, rule);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      if (std::abs(r - c) == 2) CHECK(std::abs(t2(r, c)) > 1e-6);
      else CHECK(std::abs(t2(r, c)) <= 1e-14);
    }
}

TEST_CASE("the Laplacian convention matches the tangent map") {
  // At phi = 0, tangent_map(psi_l) = (lambda_l - 1) * integral (s_a, s_b) psi_l omega_FS
  // with lambda_l the spectrum entry of degree l.
  const PolarizedModel model(2);
  const QuadratureRule rule = QuadratureRule::defaults(2);
  const Spectrum s = laplacian_spectrum(MetricPotential::zero(), model, 4, 2);
  for (int l = 1; l <= 2; ++l) {
    const SphereFunction psi = SphereFunction::harmonic(l, 1, 1.0, 0.0);
    const double lambda = s.mode(1)[l - 1];
    const GridSamples g = psi.on_grid(rule);
    const HermitianForm moment = density_gram(model, rule, g.value);
    CHECK(max_entry_diff(tangent_map(MetricPotential::zero(), psi, model, rule), (lambda - 1.0) * moment) <= 1e-12);
  }
}

TEST_CASE("round spectrum") {
  for (int k : {1, 2, 3}) {
    const PolarizedModel model(k);
    const Spectrum s = laplacian_spectrum(MetricPotential::zero(), model, 6, 2 * k);
    const auto m0 = s.mode(0);
    REQUIRE(m0.size() >= 3);
    CHECK(std::abs(m0[0]) <= 1e-10);
    CHECK(m0[2] / m0[1] == doctest::Approx(3.0).epsilon(1e-10));
    for (int l = 0; l < static_cast<int>(m0.size()); ++l) CHECK(m0[l] == doctest::Approx(-l * (l + 1.0) / k).epsilon(1e-10));
    CHECK(s.distance_to_one > 0.0);
    CHECK(s.distance_to_one == doctest::Approx(1.0));
    CHECK(s.refinement_shift <= 1e-7);
  }
}

TEST_CASE("pull-backs by z -> lambda z are isometries: same spectrum") {
  const PolarizedModel model(2);
  const Spectrum s = laplacian_spectrum(scaling_potential(model, 1.7), model, 5, 3);
  for (const auto& e : s.entries) {
    const int l = e.mode + e.index;
    CHECK(e.eigenvalue == doctest::Approx(-l * (l + 1.0) / 2).epsilon(1e-8));
  }
  CHECK(s.refinement_shift <= 1e-7);
  // A non-isometric deformation moves the spectrum but stays converged.
  const Spectrum t = laplacian_spectrum(radial_phi(), model, 5, 2);
  CHECK(std::abs(t.mode(0)[1] + 1.0) > 1e-3);
  CHECK(t.refinement_shift <= 1e-7);
  CHECK_THROWS(laplacian_spectrum(general_phi(), model, 5, 2));
}

TEST_CASE("tangent rank") {
  CHECK(tangent_rank(MetricPotential::zero(), FunctionBasis::real_harmonics(10, 2, 12), PolarizedModel(1),
                     QuadratureRule::defaults(1)).rank == 4);
  CHECK(tangent_rank(MetricPotential::zero(), FunctionBasis::real_harmonics(10, 4, 24), PolarizedModel(2),
                     QuadratureRule::defaults(2)).rank == 9);
  CHECK(tangent_rank(general_phi(), FunctionBasis::constants(), PolarizedModel(2), QuadratureRule::defaults(2)).rank == 1);
  const PolarizedModel m3(3);
  CHECK(tangent_rank(MetricPotential::zero(), FunctionBasis::defaults(m3), m3, QuadratureRule::defaults(3)).rank == 16);
}

TEST_CASE("function basis") {
  const FunctionBasis b = FunctionBasis::real_harmonics(5, 2, 12);
  CHECK(b.size() == 12);
  CHECK(b.labels[0] == "P0");
  CHECK(b.gram_min_eigenvalue(QuadratureRule::defaults(2)) > 1e-10);
  CHECK(FunctionBasis::defaults(PolarizedModel(1)).gram_min_eigenvalue(QuadratureRule::defaults(1)) > 1e-10);
}

TEST_CASE("products independence") {
  const double p1 = products_independence(MetricPotential::zero(), PolarizedModel(1), QuadratureRule::defaults(1));
  const double p2 = products_independence(MetricPotential::zero(), PolarizedModel(2), QuadratureRule::defaults(2));
  CHECK(p1 > 1e-4);
  CHECK(p2 > 1e-5);
  CHECK(products_independence(general_phi(), PolarizedModel(2), QuadratureRule::defaults(2)) > 1e-5);
  const SectionFamily dup({SectionPoly::monomial(2, 0), SectionPoly::monomial(2, 0)});
  CHECK(std::abs(products_independence(MetricPotential::zero(), PolarizedModel(2), QuadratureRule::defaults(2), &dup)) <= 1e-12);
}

TEST_CASE("inversion") {
  const PolarizedModel model(1);
  const QuadratureRule rule = QuadratureRule::defaults(1);
  const SectionFamily v = SectionFamily::monomials(1);
  const Inversion same = invert_hilbert(hilb(radial_phi(), model, rule, &v), v, radial_phi(), model, rule);
  CHECK(same.iterations == 0);
  CHECK(same.residual <= 1e-12);

  Eigen::MatrixXcd t(2, 2);
  t << 1.7, cplx(0.05, 0.02), cplx(0.05, -0.02), 1.5;
  const Inversion r = invert_hilbert(HermitianForm(t), v, MetricPotential::zero(), model, rule);
  CHECK(r.residual <= 1e-8);
  CHECK((hilb(r.phi, model, rule, &v) - HermitianForm(t)).frobenius() <= 1e-8);
  for (std::size_t i = 1; i < r.residual_history.size(); ++i) CHECK(r.residual_history[i] < r.residual_history[i - 1]);

  CHECK_THROWS_AS(invert_hilbert(HermitianForm::identity(3), v, MetricPotential::zero(), model, rule),
                  std::invalid_argument);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(invert_hilbert(HermitianForm(bad), v, MetricPotential::zero(), model, rule), std::invalid_argument);

  InversionOptions capped;
  capped.max_iterations = 1;
  capped.tol = 1e-14;
  try {
    invert_hilbert(HermitianForm(t), v, MetricPotential::zero(), model, rule, capped);
    FAIL("expected SolverFailure");
  } catch (const SolverFailure& e) {
    CHECK(e.history.size() == 2);
  }
}

TEST_CASE("scaling family oracle") {
  for (int k : {1, 2}) {
    const PolarizedModel model(k);
    const QuadratureRule rule = QuadratureRule::defaults(k);
    const SectionFamily ends({SectionPoly::monomial(k, 0), SectionPoly::monomial(k, k)});
    double previous = 0.0;
    for (double lambda : {0.5, 0.8, 1.0, 1.3, 2.0}) {
      const HermitianForm g = hilb(scaling_potential(model, lambda), model, rule, &ends);
      const double ratio = g(0, 0).real() / g(1, 1).real();
      CHECK(ratio > previous);
      CHECK(ratio == doctest::Approx(std::pow(lambda, 2 * k)).epsilon(1e-10));
      previous = ratio;
    }
    const ScalingOracle o = scaling_ratio_oracle(model, 3.0, rule);
    CHECK(o.ratio == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(std::pow(o.lambda, 2 * k) == doctest::Approx(3.0).epsilon(1e-9));
  }
}
