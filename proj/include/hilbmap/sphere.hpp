#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Sections of O(k) over CP^1 and their zero divisors.
namespace hilbmap {

using cplx = std::complex<double>;

struct PolarizedModel {
  int k = 1;

  explicit PolarizedModel(int degree);
  int m() const { return k + 1; }
};

// A point of CP^1: a finite affine coordinate or the point at infinity.
class Point {
 public:
  static Point at(cplx z) { return Point(z); }
  static Point infinity() { return Point(); }
  // From the compactified coordinates x = |z|^2/(1+|z|^2), theta = arg z.
  static Point from_polar(double x, double theta);

  bool is_infinity() const { return !z_.has_value(); }
  cplx z() const;
  // Compactified radial coordinate; 1 at infinity.
  double x() const;
  double theta() const;

  std::string describe() const;

 private:
  Point() = default;
  explicit Point(cplx z) : z_(z) {}
  std::optional<cplx> z_;
};

enum class Chart { z, w };

struct FrameValue {
  cplx value;
  Chart chart;
};

// Section of O(k) as sum_a coeffs[a] z^a in the affine frame over the z-chart.
// In the w = 1/z chart the same section reads w^k s(1/w).
class SectionPoly {
 public:
  explicit SectionPoly(std::vector<cplx> coeffs);
  static SectionPoly monomial(int k, int a, cplx c = 1.0);

  int k() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  bool is_zero() const;
  // Largest index with a non-negligible coefficient; -1 for the zero section.
  int degree() const;

  cplx value_z(cplx z) const;
  cplx value_w(cplx w) const;
  // Value in the Fubini–Study unitary frame: |result|^2 = |s|^2_{h_FS}.
  cplx normalized_value(double x, double theta) const;

  // Vanishing order at p; k + 1 is returned for the zero section.
  int order_at(const Point& p) const;
  // j-th Taylor coefficient at p in the chart containing p (w-chart at infinity).
  cplx taylor_coefficient(const Point& p, int j) const;

 private:
  std::vector<cplx> coeffs_;
};

FrameValue eval_section(const SectionPoly& s, const Point& p);

class SectionFamily {
 public:
  explicit SectionFamily(std::vector<SectionPoly> members, std::string label = {});

  int k() const { return members_.front().k(); }
  int size() const { return static_cast<int>(members_.size()); }
  const std::vector<SectionPoly>& members() const { return members_; }
  const SectionPoly& operator[](int i) const { return members_[i]; }
  const std::string& label() const { return label_; }

  // Row i holds the coefficients of member i.
  Eigen::MatrixXcd coefficient_matrix() const;
  static SectionFamily from_matrix(const Eigen::MatrixXcd& rows, std::string label = {});
  static SectionFamily monomials(int k);

  int rank(double rel_tol = 1e-10) const;
  bool is_independent() const { return rank() == size(); }

 private:
  std::vector<SectionPoly> members_;
  std::string label_;
};

struct ZeroOrder {
  Point point;
  int order;
};

// Common zeros of the family with order min over members; empty iff the
// family generates O(k).
std::vector<ZeroOrder> family_vanishing_profile(const SectionFamily& family);

bool generates(const SectionFamily& family);

struct MinimalityReport {
  bool minimal = false;
  std::string reason;
  // minimal: for member i, a point where it alone is nonzero.
  std::vector<Point> isolating_points;
  // not minimal because a hyperplane of the span generates: that hyperplane.
  std::optional<SectionFamily> generating_hyperplane;
};

// Requires a linearly independent family.
MinimalityReport is_minimal_generating(const SectionFamily& family);

}  // namespace hilbmap
