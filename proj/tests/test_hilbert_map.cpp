#include <cmath>
#include <random>

#include "doctest.h"
#include "hilbmap/errors.hpp"
#include "hilbmap/evaluation_cone.hpp"
#include "hilbmap/hilbert_map.hpp"
#include "hilbmap/kernels.hpp"
#include "support.hpp"

using namespace hilbmap;

namespace {

MetricPotential smooth_radial() {
  return MetricPotential(SphereFunction::from_radial([](double x) { return 0.4 * x * x - 0.2 * x + 0.1; }, 8));
}

MetricPotential smooth_general() {
  return MetricPotential(SphereFunction::from_radial([](double x) { return 0.3 * x * (1 - x); }, 8) +
                         SphereFunction::harmonic(2, 1, 0.05, -0.03) + SphereFunction::harmonic(3, 2, 0.02, 0.01));
}

}  // namespace

TEST_CASE("quadrature rules") {
  const auto& r = gauss_legendre_unit(64);
  double s = 0.0, m3 = 0.0;
  for (int j = 0; j < r.size(); ++j) {
    s += r.weights[j];
    m3 += r.weights[j] * std::pow(r.nodes[j], 3);
    if (j) CHECK(r.nodes[j] > r.nodes[j - 1]);
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m3 == doctest::Approx(0.25).epsilon(1e-14));
  const QuadratureRule q = QuadratureRule::defaults(3);
  CHECK(q.radial_count() == 256);
  CHECK(q.angular_count() == 20);
  CHECK(q.refined().angular_count() == 40);
}

TEST_CASE("fs_gram closed form") {
  CHECK(fs_gram(PolarizedModel(1))(0, 0).real() == doctest::Approx(M_PI / 2));
  const HermitianForm g2 = fs_gram(PolarizedModel(2));
  CHECK(g2(0, 0).real() == doctest::Approx(2 * M_PI / 3));
  CHECK(g2(1, 1).real() == doctest::Approx(M_PI / 3));
  CHECK(g2(2, 2).real() == doctest::Approx(2 * M_PI / 3));
  for (int k = 1; k <= 7; ++k) {
    const HermitianForm g = fs_gram(PolarizedModel(k));
    for (int a = 0; a <= k; ++a) {
      CHECK(testing::rel_err(g(a, a).real(), testing::fs_entry(k, a)) < 1e-13);
      CHECK(g(a, a).real() == doctest::Approx(g(k - a, k - a).real()).epsilon(1e-14));
    }
  }
}

TEST_CASE("hilb at phi = 0 reproduces the Beta oracle on the general path too") {
  for (int k : {1, 2, 3, 5}) {
    const PolarizedModel model(k);
    const QuadratureRule rule = QuadratureRule::defaults(k);
    const HermitianForm h = hilb(MetricPotential::zero(), model, rule);
    // Force the product-grid path with an identically zero harmonic.
    const MetricPotential zero_general(SphereFunction::harmonic(2, 1, 0.0, 1e-300));
    const HermitianForm g = hilb(zero_general, model, rule);
    for (int a = 0; a <= k; ++a) {
      CHECK(testing::rel_err(h(a, a).real(), testing::fs_entry(k, a)) <= 1e-10);
      CHECK(testing::rel_err(g(a, a).real(), testing::fs_entry(k, a)) <= 1e-10);
    }
    CHECK(max_entry_diff(g, h) <= 1e-12);
  }
}

TEST_CASE("constant shift scales the Gram by e^{-c}") {
  const PolarizedModel model(3);
  const QuadratureRule rule = QuadratureRule::defaults(3);
  const MetricPotential phi = smooth_general();
  const HermitianForm h = hilb(phi, model, rule);
  const HermitianForm hc = hilb(phi.plus(SphereFunction::constant(1.0), 0.7), model, rule);
  CHECK(max_entry_rel_diff(hc, std::exp(-0.7) * h) <= 1e-10);
}

TEST_CASE("Gram is hermitian positive definite; radial potentials give diagonal Grams") {
  const PolarizedModel model(3);
  const QuadratureRule rule = QuadratureRule::defaults(3);
  const HermitianForm r = hilb(smooth_radial(), model, rule);
  CHECK(r.is_positive_definite());
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a != b) CHECK(std::abs(r(a, b)) == 0.0);
  const HermitianForm g = hilb(smooth_general(), model, rule);
  CHECK(g.is_positive_definite());
  CHECK((g.entries() - g.entries().adjoint()).norm() == 0.0);
  CHECK(std::abs(g(0, 3)) > 1e-6);
  // Only mu = 2 terms: every Fourier mode of the density is even, so odd |a - b| decouple.
  const HermitianForm e = hilb(MetricPotential(SphereFunction::from_radial([](double x) { return 0.2 * x; }, 4) +
                                               SphereFunction::harmonic(3, 2, 0.05, 0.03)),
                               model, rule);
  CHECK(std::abs(e(0, 2)) > 1e-6);
  CHECK(std::abs(e(1, 3)) > 1e-6);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if ((a - b) % 2 != 0) CHECK(std::abs(e(a, b)) <= 1e-14 * e.max_abs());
}

TEST_CASE("rotation equivariance") {
  const PolarizedModel model(3);
  const QuadratureRule rule(256, 40);
  const double alpha = 0.37;
  // phi(e^{i alpha} z) for phi = sum over harmonics c cos(mu theta) + s sin(mu theta).
  const SphereFunction base = SphereFunction::from_radial([](double x) { return 0.2 * x; }, 4);
  auto rotated = [&](double a) {
    SphereFunction f = base;
    for (auto [deg, mu, c, s] : {std::tuple{2, 1, 0.05, -0.03}, std::tuple{3, 2, 0.02, 0.01}}) {
      const double ca = std::cos(mu * a), sa = std::sin(mu * a);
      f += SphereFunction::harmonic(deg, mu, c * ca + s * sa, s * ca - c * sa);
    }
    return MetricPotential(f);
  };
  const HermitianForm h0 = hilb(rotated(0.0), model, rule);
  const HermitianForm h1 = hilb(rotated(alpha), model, rule);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      // entry (a, b) integrates F e^{i(a-b) theta}; F(theta + alpha) shifts it by e^{-i alpha (a-b)}
      const cplx expect = h0(a, b) * std::exp(cplx(0.0, -alpha * (a - b)));
      CHECK(std::abs(h1(a, b) - expect) <= 1e-12);
    }
}

TEST_CASE("basis change conjugates the Gram") {
  const PolarizedModel model(2);
  const QuadratureRule rule = QuadratureRule::defaults(2);
  Eigen::MatrixXcd u(2, 3);
  u << cplx(1, 0.5), cplx(0, -1), cplx(2, 0), cplx(0.3, 0), cplx(1, 1), cplx(-1, 0.2);
  const SectionFamily v = SectionFamily::from_matrix(u);
  const MetricPotential phi = smooth_general();
  const HermitianForm full = hilb(phi, model, rule);
  const HermitianForm restricted = hilb(phi, model, rule, &v);
  const Eigen::MatrixXcd expect = u * full.entries() * u.adjoint();
  CHECK((restricted.entries() - expect).norm() <= 1e-12 * expect.norm());
}

TEST_CASE("refinement converges and reports its history") {
  const PolarizedModel model(2);
  const RefinedGram r = hilb_refined(smooth_general(), model, QuadratureRule(64, 16));
  CHECK(!r.history.empty());
  CHECK(r.history.back().max_entry_delta < 1e-10);
  const HermitianForm a = hilb(smooth_general(), model, QuadratureRule(256, 16));
  const HermitianForm b = hilb(smooth_general(), model, QuadratureRule(512, 32));
  CHECK(max_entry_diff(a, b) <= 1e-9);
  CHECK_THROWS_AS(hilb_refined(smooth_general(), model, QuadratureRule(4, 4), nullptr, 1e-30, 1), SolverFailure);
}

TEST_CASE("non-admissible potential names the grid point") {
  const PolarizedModel model(1);
  // L(3x^2) = d/dx (x(1-x) 6x) = 12x - 18x^2, so MA = 1 - 6 < 0 near x = 1.
  const MetricPotential bad(SphereFunction::from_radial([](double x) { return 3.0 * x * x; }, 4));
  try {
    hilb(bad, model, QuadratureRule::defaults(1));
    FAIL("expected NotAdmissible");
  } catch (const NotAdmissible& e) {
    CHECK(e.density <= 0.0);
    CHECK(e.location.x() > 0.5);
  }
}

TEST_CASE("hilb_from_measure") {
  const PolarizedModel model(2);
  const MetricPotential ref = MetricPotential::zero();
  const std::vector<Point> one = {Point::at({0.3, 0.4})};
  const std::vector<double> w1 = {1.0};
  const HermitianForm r1 = hilb_from_measure(model, one, w1, ref);
  const Eigen::VectorXd ev = r1.eigenvalues();
  CHECK(ev(1) <= 1e-12 * ev(2));
  const std::vector<double> zero = {0.0};
  CHECK(hilb_from_measure(model, one, zero, ref).max_abs() == 0.0);
  const std::vector<double> neg = {-1.0};
  CHECK_THROWS(hilb_from_measure(model, one, neg, ref));

  // The quadrature rule applied to e^{-phi} omega_phi is exactly such a measure.
  const MetricPotential phi(SphereFunction::from_radial([](double x) { return 0.3 * x * (1 - x); }, 8));
  const QuadratureRule rule(48, 12);
  std::vector<Point> pts;
  std::vector<double> wts;
  for (int j = 0; j < rule.radial_count(); ++j)
    for (int l = 0; l < rule.angular_count(); ++l) {
      const double x = rule.radial().nodes[j];
      pts.push_back(Point::from_polar(x, rule.angles()[l]));
      wts.push_back(0.5 * model.k * rule.radial().weights[j] * rule.angular_weight() * phi.ma_density(model.k, x, 0.0));
    }
  CHECK(max_entry_rel_diff(hilb_from_measure(model, pts, wts, phi), hilb(phi, model, rule)) <= 1e-12);
}

TEST_CASE("scalar and vector kernels give the same Gram") {
  const PolarizedModel model(3);
  const QuadratureRule rule = QuadratureRule::defaults(3);
  simd::force(simd::Isa::scalar);
  const HermitianForm a = hilb(smooth_general(), model, rule);
  if (simd::isa_available(simd::Isa::avx2)) {
    simd::force(simd::Isa::avx2);
    const HermitianForm b = hilb(smooth_general(), model, rule);
    CHECK((a.entries() - b.entries()).norm() == 0.0);
  }
}

TEST_CASE("hermitian form vectorization") {
  Eigen::MatrixXcd m(2, 2);
  m << 2.0, cplx(1, -3), cplx(1, 3), -1.0;
  const HermitianForm h(m);
  CHECK(h.real_vector().norm() == doctest::Approx(h.frobenius()));
  CHECK((HermitianForm::from_real_vector(h.real_vector()).entries() - m).norm() < 1e-15);
  CHECK_FALSE(h.is_psd());
  CHECK(HermitianForm::identity(3).is_positive_definite());
  CHECK(HermitianForm::zero(3).is_psd());
  CHECK_FALSE(HermitianForm::zero(3).is_positive_definite());
}
