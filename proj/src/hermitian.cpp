#include "hilbmap/hermitian.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace hilbmap {

HermitianForm::HermitianForm(const Eigen::MatrixXcd& entries) {
  if (entries.rows() != entries.cols()) throw std::invalid_argument("hermitian form must be square");
  entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianForm HermitianForm::zero(int dim) { return HermitianForm(Eigen::MatrixXcd::Zero(dim, dim)); }

HermitianForm HermitianForm::identity(int dim) {
  return HermitianForm(Eigen::MatrixXcd::Identity(dim, dim));
}

HermitianForm HermitianForm::from_real_vector(const Eigen::VectorXd& v) {
  const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  if (m * m != v.size()) throw std::invalid_argument("real vector length is not a square");
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(m, m);
  int idx = 0;
  for (int a = 0; a < m; ++a) e(a, a) = v(idx++);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const std::complex<double> z(v(idx) / std::sqrt(2.0), v(idx + 1) / std::sqrt(2.0));
      idx += 2;
      e(a, b) = z;
      e(b, a) = std::conj(z);
    }
  return HermitianForm(e);
}

Eigen::VectorXd HermitianForm::eigenvalues() const {
  if (dim() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double HermitianForm::min_eigenvalue() const { return eigenvalues()(0); }

bool HermitianForm::is_positive_definite() const {
  Eigen::LLT<Eigen::MatrixXcd> llt(entries_);
  return llt.info() == Eigen::Success && min_eigenvalue() > 0.0;
}

bool HermitianForm::is_psd(double rel_tol) const {
  const Eigen::VectorXd ev = eigenvalues();
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) >= -rel_tol * scale;
}

double HermitianForm::max_abs() const { return entries_.cwiseAbs().maxCoeff(); }

Eigen::VectorXd HermitianForm::real_vector() const {
  const int m = dim();
  Eigen::VectorXd v(m * m);
  int idx = 0;
  for (int a = 0; a < m; ++a) v(idx++) = entries_(a, a).real();
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      v(idx++) = std::sqrt(2.0) * entries_(a, b).real();
      v(idx++) = std::sqrt(2.0) * entries_(a, b).imag();
    }
  return v;
}

HermitianForm HermitianForm::transported(const Eigen::MatrixXcd& rows) const {
  if (rows.cols() != dim()) throw std::invalid_argument("transport: dimension mismatch");
  return HermitianForm(rows * entries_ * rows.adjoint());
}

HermitianForm& HermitianForm::operator+=(const HermitianForm& o) {
  if (o.dim() != dim()) throw std::invalid_argument("hermitian sum: dimension mismatch");
  entries_ += o.entries_;
  return *this;
}

HermitianForm& HermitianForm::operator*=(double c) {
  entries_ *= c;
  return *this;
}

double pairing(const HermitianForm& h, const HermitianForm& q) {
  if (h.dim() != q.dim()) throw std::invalid_argument("pairing: dimension mismatch");
  return (h.entries().array() * q.entries().array()).sum().real();
}

double max_entry_diff(const HermitianForm& a, const HermitianForm& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("entry diff: dimension mismatch");
  return (a.entries() - b.entries()).cwiseAbs().maxCoeff();
}

double max_entry_rel_diff(const HermitianForm& a, const HermitianForm& b) {
  return max_entry_diff(a, b) / b.max_abs();
}

}  // namespace hilbmap
