#include "hilbmap/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

namespace hilbmap {
namespace {

constexpr int kScanX = 128;
constexpr int kScanTheta = 64;
constexpr int kRefineCandidates = 8;

double sum_of_squares(const SectionFamily& f, double x, double theta) {
  double s = 0.0;
  for (const auto& m : f.members()) s += std::norm(m.normalized_value(x, theta));
  return s;
}

double den_scale(const SectionFamily& den) {
  double s = 0.0;
  for (const auto& m : den.members())
    for (const cplx& c : m.coeffs()) s += std::norm(c);
  return s;
}

template <class F>
double golden_max(F&& g, double lo, double hi, double& arg) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 90 && b - a > 1e-15; ++it) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  // Endpoints are candidates too: maxima at the poles sit on the boundary.
  double best_arg = gc >= gd ? c : d;
  double best = std::max(gc, gd);
  for (double e : {lo, hi}) {
    const double ge = g(e);
    if (ge > best) {
      best = ge;
      best_arg = e;
    }
  }
  arg = best_arg;
  return best;
}

struct Candidate {
  double value;
  double x;
  double theta;
};

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  theta = std::fmod(theta, two_pi);
  return theta < 0.0 ? theta + two_pi : theta;
}

// Leading Taylor coefficients of each member at p, all in the chart of p.
Eigen::VectorXcd leading_values(const SectionFamily& f, const Point& p, int order) {
  Eigen::VectorXcd v(f.size());
  for (int i = 0; i < f.size(); ++i) v(i) = f[i].taylor_coefficient(p, order);
  return v;
}

int family_order(const SectionFamily& f, const Point& p) {
  int order = f.k() + 1;
  for (const auto& m : f.members()) order = std::min(order, m.order_at(p));
  return order;
}

// Rows expressing each member of `family` in the independent rows `basis`;
// residual is the largest relative distance of a member from span(basis).
Eigen::MatrixXcd express_in(const Eigen::MatrixXcd& family, const Eigen::MatrixXcd& basis, double& residual) {
  const Eigen::MatrixXcd at = basis.transpose().colPivHouseholderQr().solve(family.transpose());
  const Eigen::MatrixXcd a = at.transpose();
  residual = 0.0;
  for (Eigen::Index i = 0; i < family.rows(); ++i) {
    const double norm = family.row(i).norm();
    if (norm == 0.0) continue;
    residual = std::max(residual, (a.row(i) * basis - family.row(i)).norm() / norm);
  }
  return a;
}

SectionFamily random_family(int size, int k, std::mt19937_64& rng, const std::string& label) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd rows(size, k + 1);
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    for (Eigen::Index a = 0; a < rows.cols(); ++a) rows(i, a) = cplx(gauss(rng), gauss(rng));
  return SectionFamily::from_matrix(rows, label);
}

}  // namespace

HermitianForm family_form(const SectionFamily& family) {
  const Eigen::MatrixXcd c = family.coefficient_matrix();
  return HermitianForm(c.transpose() * c.conjugate());
}

double pointwise_ratio(const SectionFamily& num, const SectionFamily& den, double x, double theta) {
  const double d = sum_of_squares(den, x, theta);
  if (d <= 1e-28 * den_scale(den)) return std::numeric_limits<double>::quiet_NaN();
  return sum_of_squares(num, x, theta) / d;
}

RatioSup ratio_sup(const SectionFamily& num, const SectionFamily& den) {
  if (num.k() != den.k()) throw std::invalid_argument("ratio_sup: families of different degree");
  std::vector<Candidate> exact;  // limits at the denominator's zeros and the poles
  for (const auto& zero : family_vanishing_profile(den)) {
    const int num_order = family_order(num, zero.point);
    if (num_order < zero.order) throw UnboundedRatio(zero.point, zero.order, num_order);
    const double limit = leading_values(num, zero.point, zero.order).squaredNorm() /
                         leading_values(den, zero.point, zero.order).squaredNorm();
    exact.push_back({limit, zero.point.x(), wrap_angle(zero.point.theta())});
  }

  const auto ratio = [&](double x, double theta) {
    const double r = pointwise_ratio(num, den, std::clamp(x, 0.0, 1.0), theta);
    return std::isnan(r) ? -1.0 : r;
  };
  for (double pole : {0.0, 1.0})
    if (const double r = ratio(pole, 0.0); r >= 0.0) exact.push_back({r, pole, 0.0});

  std::vector<Candidate> scan;
  for (int i = 0; i < kScanX; ++i)
    for (int l = 0; l < kScanTheta; ++l) {
      const double x = (i + 0.5) / kScanX;
      const double theta = 2.0 * std::numbers::pi * l / kScanTheta;
      scan.push_back({ratio(x, theta), x, theta});
    }
  std::stable_sort(scan.begin(), scan.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  scan.resize(std::min<std::size_t>(scan.size(), kRefineCandidates));

  const double hx = 1.0 / kScanX;
  const double ht = 2.0 * std::numbers::pi / kScanTheta;
  std::vector<Candidate> refined = exact;
  for (Candidate c : scan) {
    for (int round = 0; round < 100; ++round) {
      const double before = c.value;
      double arg = c.x;
      c.value = golden_max([&](double x) { return ratio(x, c.theta); }, std::max(0.0, c.x - hx),
                           std::min(1.0, c.x + hx), arg);
      c.x = arg;
      arg = c.theta;
      c.value = golden_max([&](double t) { return ratio(c.x, t); }, c.theta - ht, c.theta + ht, arg);
      c.theta = arg;
      if (c.value - before <= 1e-16 * std::max(1.0, c.value)) break;
    }
    c.theta = wrap_angle(c.theta);
    if (c.x <= 0.0 || c.x >= 1.0) c.theta = 0.0;
    refined.push_back(c);
  }

  double best = -1.0;
  for (const auto& c : refined) best = std::max(best, c.value);
  // Ties go to the exact candidates (poles, limits at zeros), then the smallest (x, theta).
  const Candidate* pick = nullptr;
  bool pick_exact = false;
  for (std::size_t i = 0; i < refined.size(); ++i) {
    const Candidate& c = refined[i];
    if (c.value < best - 1e-12 * std::max(1.0, best)) continue;
    const bool is_exact = i < exact.size();
    if (!pick || (is_exact && !pick_exact) ||
        (is_exact == pick_exact && (c.x < pick->x || (c.x == pick->x && c.theta < pick->theta)))) {
      pick = &c;
      pick_exact = is_exact;
    }
  }
  return {best, Point::from_polar(pick->x, pick->theta)};
}

HermitianForm HalfSpaceConstraint::canonical_normal() const {
  HermitianForm n = bound * q_den - q_num;
  const double norm = n.frobenius();
  return norm > 0.0 ? (1.0 / norm) * n : n;
}

HalfSpaceConstraint make_constraint(const SectionFamily& num, const SectionFamily& den) {
  const RatioSup sup = ratio_sup(num, den);
  return {family_form(num), family_form(den), sup.bound, sup.maximizer, num, den};
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::strict_inside:
      return "strict_inside";
    case Membership::boundary:
      return "boundary";
    case Membership::outside:
      return "outside";
  }
  return "unknown";
}

MembershipResult check_membership(const HermitianForm& h, const HalfSpaceConstraint& c, double rel_tol) {
  if (h.dim() != c.q_num.dim()) throw std::invalid_argument("membership: dimension mismatch");
  MembershipResult r;
  r.lhs = pairing(h, c.q_num);
  r.rhs = c.bound * pairing(h, c.q_den);
  const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.margin = scale > 0.0 ? (r.rhs - r.lhs) / scale : 0.0;
  if (std::abs(r.margin) <= rel_tol)
    r.verdict = Membership::boundary;
  else
    r.verdict = r.margin > 0.0 ? Membership::strict_inside : Membership::outside;
  return r;
}

SectionFamily prune_family(const SectionFamily& family, double rel_tol) {
  const Eigen::MatrixXcd c = family.coefficient_matrix();
  // Greedy independent rows B, then C = A B and C' = R B with A^dagger A = R^dagger R.
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    const double norm = c.row(i).norm();
    if (norm == 0.0) continue;
    if (kept.empty()) {
      kept.push_back(i);
      continue;
    }
    Eigen::MatrixXcd basis(static_cast<Eigen::Index>(kept.size()), c.cols());
    for (std::size_t r = 0; r < kept.size(); ++r) basis.row(static_cast<Eigen::Index>(r)) = c.row(kept[r]);
    double residual = 0.0;
    express_in(c.row(i), basis, residual);
    if (residual > rel_tol) kept.push_back(i);
  }
  if (kept.empty()) throw std::invalid_argument("cannot prune an all-zero family");
  Eigen::MatrixXcd basis(static_cast<Eigen::Index>(kept.size()), c.cols());
  for (std::size_t r = 0; r < kept.size(); ++r) basis.row(static_cast<Eigen::Index>(r)) = c.row(kept[r]);
  if (static_cast<int>(kept.size()) == family.size()) return family;
  double residual = 0.0;
  const Eigen::MatrixXcd a = express_in(c, basis, residual);
  const Eigen::MatrixXcd gram = a.adjoint() * a;
  const Eigen::MatrixXcd r = gram.llt().matrixU();
  return SectionFamily::from_matrix(r * basis, family.label().empty() ? "pruned" : family.label() + " (pruned)");
}

PrunedPair prune_families(const SectionFamily& num, const SectionFamily& den) {
  return {prune_family(num), prune_family(den)};
}

Reduction reduce_constraint(const SectionFamily& num_in, const SectionFamily& den_in) {
  const PrunedPair pruned = prune_families(num_in, den_in);
  const SectionFamily& num = pruned.num;
  const SectionFamily& den = pruned.den;
  const Eigen::MatrixXcd num_rows = num.coefficient_matrix();
  const Eigen::MatrixXcd den_rows = den.coefficient_matrix();

  Reduction out{make_constraint(num, den), false, {}, std::nullopt, den, false};

  double residual = 0.0;
  const Eigen::MatrixXcd a = express_in(num_rows, den_rows, residual);
  out.num_in_span = residual <= 1e-10;
  if (out.num_in_span) {
    // sum |sigma_i|^2 = v^dagger (A^dagger A) v with v = (s_j(p))_j.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a.adjoint() * a);
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
      out.lambdas.push_back(std::max(eig.eigenvalues()(i), 0.0));
    out.diagonal_den = SectionFamily::from_matrix(eig.eigenvectors().adjoint() * den_rows, "diagonalized den");
    if (generates(den)) out.redundant = is_minimal_generating(den).minimal;
  }

  // Align at the maximizer: the unitary U with U v = (|v|, 0, ..., 0).
  const Point& p0 = out.constraint.maximizer;
  const int order = family_order(den, p0);
  const Eigen::VectorXcd v = leading_values(den, p0, std::min(order, den.k()));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v);
  const Eigen::MatrixXcd q = qr.householderQ();
  out.aligned_den = SectionFamily::from_matrix(q.adjoint() * den_rows, "aligned den");
  return out;
}

std::vector<HalfSpaceConstraint> sample_outer_polytope(const PolarizedModel& model, int count,
                                                       std::uint64_t seed) {
  std::vector<HalfSpaceConstraint> out;
  if (count <= 0) return out;
  std::mt19937_64 rng(seed);
  const int m = model.m();
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts < 20 * count) {
    ++attempts;
    const int l = std::uniform_int_distribution<int>(2, m)(rng);
    const SectionFamily den = random_family(l, model.k, rng, "den");
    if (!generates(den)) continue;
    const int q = std::uniform_int_distribution<int>(1, l)(rng);
    SectionFamily num = random_family(q, model.k, rng, "num");
    if (std::bernoulli_distribution(0.5)(rng)) {
      const SectionFamily mix = random_family(q, l - 1, rng, "mix");  // q x l mixing coefficients
      num = SectionFamily::from_matrix(mix.coefficient_matrix() * den.coefficient_matrix(), "num in span");
    }
    HalfSpaceConstraint c = reduce_constraint(num, den).constraint;
    const HermitianForm normal = c.canonical_normal();
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const HalfSpaceConstraint& e) {
      return (e.canonical_normal() - normal).frobenius() < 1e-9;
    });
    if (!duplicate) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace hilbmap
