#include "hilbmap/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace hilbmap {
namespace {

// Relative size below which a coefficient or Taylor coefficient counts as zero.
constexpr double kZeroTol = 1e-9;
// Roots of a multiple zero split by ~eps^(1/mult); clusters are merged at this
// radius and then certified with the Taylor test at their centroid.
constexpr double kClusterRadius = 1e-5;

double binomial(int n, int r) {
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

std::vector<cplx> roots_of(const SectionPoly& s) {
  const int d = s.degree();
  if (d <= 0) return {};
  const auto& c = s.coeffs();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<cplx> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + d);
  return roots;
}

// Distinct zeros of s (finite part), each located to near machine precision.
std::vector<cplx> distinct_zeros(const SectionPoly& s) {
  auto roots = roots_of(s);
  std::vector<cplx> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    std::vector<cplx> cluster{roots[i]};
    used[i] = true;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) <= kClusterRadius * (1.0 + std::abs(roots[i]))) {
        cluster.push_back(roots[j]);
        used[j] = true;
      }
    }
    const cplx centroid =
        std::accumulate(cluster.begin(), cluster.end(), cplx{0.0}) / static_cast<double>(cluster.size());
    if (s.order_at(Point::at(centroid)) == static_cast<int>(cluster.size())) {
      out.push_back(centroid);
    } else {
      for (const cplx& r : cluster) out.push_back(r);
    }
  }
  return out;
}

}  // namespace

PolarizedModel::PolarizedModel(int degree) : k(degree) {
  if (k < 1) throw std::invalid_argument("O(k) needs k >= 1");
}

Point Point::from_polar(double x, double theta) {
  if (x >= 1.0) return infinity();
  const double r = std::sqrt(std::max(x, 0.0) / (1.0 - x));
  return at(std::polar(r, theta));
}

cplx Point::z() const {
  if (!z_) throw std::logic_error("point at infinity has no affine coordinate");
  return *z_;
}

double Point::x() const {
  if (!z_) return 1.0;
  const double t = std::norm(*z_);
  return t / (1.0 + t);
}

double Point::theta() const { return z_ ? std::arg(*z_) : 0.0; }

std::string Point::describe() const {
  if (!z_) return "inf";
  std::ostringstream os;
  os.precision(12);
  os << "z=(" << z_->real() << "," << z_->imag() << ")";
  return os.str();
}

SectionPoly::SectionPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) throw std::invalid_argument("a section of O(k), k >= 1, needs k+1 coefficients");
}

SectionPoly SectionPoly::monomial(int k, int a, cplx c) {
  if (a < 0 || a > k) throw std::invalid_argument("monomial exponent out of range");
  std::vector<cplx> coeffs(k + 1, 0.0);
  coeffs[a] = c;
  return SectionPoly(std::move(coeffs));
}

bool SectionPoly::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == 0.0; });
}

int SectionPoly::degree() const {
  double scale = 0.0;
  for (const cplx& c : coeffs_) scale += std::abs(c);
  if (scale == 0.0) return -1;
  for (int a = k(); a >= 0; --a)
    if (std::abs(coeffs_[a]) > kZeroTol * scale) return a;
  return -1;
}

cplx SectionPoly::value_z(cplx z) const {
  cplx v = 0.0;
  for (int a = k(); a >= 0; --a) v = v * z + coeffs_[a];
  return v;
}

cplx SectionPoly::value_w(cplx w) const {
  // w^k s(1/w) = sum_a c_a w^(k-a)
  cplx v = 0.0;
  for (int a = 0; a <= k(); ++a) v = v * w + coeffs_[a];
  return v;
}

cplx SectionPoly::normalized_value(double x, double theta) const {
  const int kk = k();
  cplx v = 0.0;
  for (int a = 0; a <= kk; ++a) {
    if (coeffs_[a] == 0.0) continue;
    const double g = std::sqrt(std::pow(x, a) * std::pow(1.0 - x, kk - a));
    v += coeffs_[a] * std::polar(g, a * theta);
  }
  return v;
}

int SectionPoly::order_at(const Point& p) const {
  const int kk = k();
  if (degree() < 0) return kk + 1;
  if (p.is_infinity()) return kk - degree();
  const cplx z = p.z();
  const double r = std::max(1.0, std::abs(z));
  double scale = 0.0;
  for (int a = 0; a <= kk; ++a) scale += std::abs(coeffs_[a]) * std::pow(r, a);
  for (int j = 0; j <= kk; ++j)
    if (std::abs(taylor_coefficient(p, j)) > kZeroTol * scale) return j;
  return kk + 1;
}

cplx SectionPoly::taylor_coefficient(const Point& p, int j) const {
  const int kk = k();
  if (j < 0 || j > kk) return 0.0;
  if (p.is_infinity()) return coeffs_[kk - j];
  const cplx z = p.z();
  cplx d = 0.0;
  for (int a = kk; a >= j; --a) d = d * z + binomial(a, j) * coeffs_[a];
  return d;
}

FrameValue eval_section(const SectionPoly& s, const Point& p) {
  if (p.is_infinity()) return {s.value_w(0.0), Chart::w};
  return {s.value_z(p.z()), Chart::z};
}

SectionFamily::SectionFamily(std::vector<SectionPoly> members, std::string label)
    : members_(std::move(members)), label_(std::move(label)) {
  if (members_.empty()) throw std::invalid_argument("section family must be nonempty");
  for (const auto& s : members_)
    if (s.k() != members_.front().k())
      throw std::invalid_argument("section family members must share the same k");
}

Eigen::MatrixXcd SectionFamily::coefficient_matrix() const {
  Eigen::MatrixXcd c(size(), k() + 1);
  for (int i = 0; i < size(); ++i)
    for (int a = 0; a <= k(); ++a) c(i, a) = members_[i].coeffs()[a];
  return c;
}

SectionFamily SectionFamily::from_matrix(const Eigen::MatrixXcd& rows, std::string label) {
  std::vector<SectionPoly> members;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    std::vector<cplx> c(rows.cols());
    for (Eigen::Index a = 0; a < rows.cols(); ++a) c[a] = rows(i, a);
    members.emplace_back(std::move(c));
  }
  return SectionFamily(std::move(members), std::move(label));
}

SectionFamily SectionFamily::monomials(int k) {
  std::vector<SectionPoly> members;
  for (int a = 0; a <= k; ++a) members.push_back(SectionPoly::monomial(k, a));
  return SectionFamily(std::move(members), "monomials");
}

int SectionFamily::rank(double rel_tol) const {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coefficient_matrix());
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++r;
  return r;
}

std::vector<ZeroOrder> family_vanishing_profile(const SectionFamily& family) {
  const SectionPoly* pivot = nullptr;
  for (const auto& s : family.members()) {
    if (s.degree() < 0) continue;
    if (!pivot || s.degree() < pivot->degree()) pivot = &s;
  }
  if (!pivot) throw std::invalid_argument("vanishing profile of an all-zero family");

  auto min_order = [&](const Point& p) {
    int order = family.k() + 1;
    for (const auto& s : family.members()) order = std::min(order, s.order_at(p));
    return order;
  };

  std::vector<ZeroOrder> out;
  for (const cplx& z : distinct_zeros(*pivot)) {
    const Point p = Point::at(z);
    if (const int order = min_order(p); order > 0) out.push_back({p, order});
  }
  std::sort(out.begin(), out.end(), [](const ZeroOrder& a, const ZeroOrder& b) {
    const cplx za = a.point.z(), zb = b.point.z();
    if (std::abs(za) != std::abs(zb)) return std::abs(za) < std::abs(zb);
    return std::arg(za) < std::arg(zb);
  });
  if (const int order = min_order(Point::infinity()); order > 0)
    out.push_back({Point::infinity(), order});
  return out;
}

bool generates(const SectionFamily& family) { return family_vanishing_profile(family).empty(); }

MinimalityReport is_minimal_generating(const SectionFamily& family) {
  if (!family.is_independent())
    throw std::invalid_argument("minimality is defined for linearly independent families");
  MinimalityReport report;
  const auto profile = family_vanishing_profile(family);
  if (!profile.empty()) {
    report.reason = "does not generate: common zero at " + profile.front().point.describe();
    return report;
  }
  const int d = family.size();
  if (d == 2) {
    // Every hyperplane of a 2-dimensional span is a single section, which
    // vanishes somewhere since k >= 1; the zeros of one member isolate the other.
    for (int i = 0; i < 2; ++i) {
      const SectionFamily other({family[1 - i]});
      report.isolating_points.push_back(family_vanishing_profile(other).front().point);
    }
    report.minimal = true;
    report.reason = "two-dimensional generating span";
    return report;
  }

  const Eigen::MatrixXcd rows = family.coefficient_matrix();
  for (int drop = 0; drop < d; ++drop) {
    Eigen::MatrixXcd sub(d - 1, rows.cols());
    for (int i = 0, r = 0; i < d; ++i)
      if (i != drop) sub.row(r++) = rows.row(i);
    SectionFamily hyper = SectionFamily::from_matrix(sub, "drop member " + std::to_string(drop));
    if (generates(hyper)) {
      report.reason = "proper subfamily generates (member " + std::to_string(drop) + " dropped)";
      report.generating_hyperplane = std::move(hyper);
      return report;
    }
  }
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::MatrixXcd mix(d - 1, d);
    for (Eigen::Index i = 0; i < mix.rows(); ++i)
      for (Eigen::Index j = 0; j < mix.cols(); ++j) mix(i, j) = cplx(gauss(rng), gauss(rng));
    SectionFamily hyper = SectionFamily::from_matrix(mix * rows, "random hyperplane");
    if (generates(hyper)) {
      report.reason = "a generic hyperplane of the span generates";
      report.generating_hyperplane = std::move(hyper);
      return report;
    }
  }
  throw std::logic_error("no generating hyperplane found for a span of dimension >= 3");
}

}  // namespace hilbmap
