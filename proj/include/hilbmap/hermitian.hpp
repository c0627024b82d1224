#pragma once

#include <Eigen/Dense>

namespace hilbmap {

// Hermitian m x m matrix: a point of B (positive definite) or of its
// closure (positive semidefinite). Symmetrized on construction.
class HermitianForm {
 public:
  HermitianForm() = default;
  explicit HermitianForm(const Eigen::MatrixXcd& entries);

  static HermitianForm zero(int dim);
  static HermitianForm identity(int dim);
  // Inverse of real_vector().
  static HermitianForm from_real_vector(const Eigen::VectorXd& v);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  std::complex<double> operator()(int a, int b) const { return entries_(a, b); }

  Eigen::VectorXd eigenvalues() const;  // ascending
  double min_eigenvalue() const;
  bool is_positive_definite() const;
  // Smallest eigenvalue >= -tol * largest |eigenvalue|.
  bool is_psd(double rel_tol = 1e-12) const;

  double frobenius() const { return entries_.norm(); }
  double max_abs() const;
  double trace() const { return entries_.trace().real(); }

  // Diagonal entries, then sqrt(2) Re and sqrt(2) Im of each a < b entry;
  // the Euclidean norm equals the Frobenius norm.
  Eigen::VectorXd real_vector() const;

  // U H U^dagger: the Gram of the family whose coefficient rows are U.
  HermitianForm transported(const Eigen::MatrixXcd& rows) const;

  HermitianForm& operator+=(const HermitianForm& o);
  HermitianForm& operator*=(double c);
  friend HermitianForm operator+(HermitianForm a, const HermitianForm& b) { return a += b; }
  friend HermitianForm operator-(HermitianForm a, const HermitianForm& b) { return a += (-1.0) * b; }
  friend HermitianForm operator*(double c, HermitianForm a) { return a *= c; }

 private:
  Eigen::MatrixXcd entries_;
};

// sum_ab H_ab Q_ab; for Q = sum_i c_i c_i^dagger this is sum_i |sigma_i|^2_H.
double pairing(const HermitianForm& h, const HermitianForm& q);

// Largest |difference| over entries, and the same relative to max |entry| of b.
double max_entry_diff(const HermitianForm& a, const HermitianForm& b);
double max_entry_rel_diff(const HermitianForm& a, const HermitianForm& b);

}  // namespace hilbmap
