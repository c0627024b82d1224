#include "hilbmap/nnls.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace hilbmap {
namespace {

// Unconstrained least squares restricted to the passive columns.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<Eigen::Index>& passive) {
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t i = 0; i < passive.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = a.col(passive[i]);
  return sub.colPivHouseholderQr().solve(b);
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double dual_tol,
                int max_iterations) {
  if (a.rows() != b.size()) throw std::invalid_argument("nnls: dimension mismatch");
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);

  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> in_passive(static_cast<std::size_t>(n), false);
  const double threshold = dual_tol * std::max((a.transpose() * b).cwiseAbs().maxCoeff(), 1e-300);

  while (out.iterations < max_iterations) {
    const Eigen::VectorXd dual = a.transpose() * (b - a * out.x);
    Eigen::Index enter = -1;
    double best = threshold;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!in_passive[j] && dual(j) > best) {
        best = dual(j);
        enter = j;
      }
    if (enter < 0) {
      out.converged = true;
      break;
    }
    in_passive[enter] = true;
    ++out.iterations;

    // Inner loop: step toward the passive least-squares solution, dropping
    // columns that would go negative.
    while (true) {
      std::vector<Eigen::Index> passive;
      for (Eigen::Index j = 0; j < n; ++j)
        if (in_passive[j]) passive.push_back(j);
      const Eigen::VectorXd z = passive_solve(a, b, passive);
      bool feasible = true;
      for (Eigen::Index i = 0; i < z.size(); ++i)
        if (z(i) <= 0.0) feasible = false;
      if (feasible) {
        out.x.setZero();
        for (std::size_t i = 0; i < passive.size(); ++i) out.x(passive[i]) = z(static_cast<Eigen::Index>(i));
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      Eigen::Index blocking = -1;
      for (std::size_t i = 0; i < passive.size(); ++i) {
        const double zi = z(static_cast<Eigen::Index>(i));
        if (zi <= 0.0) {
          const double xi = out.x(passive[i]);
          const double step = xi / (xi - zi);
          if (step < alpha) {
            alpha = step;
            blocking = passive[i];
          }
        }
      }
      for (std::size_t i = 0; i < passive.size(); ++i) {
        const Eigen::Index j = passive[i];
        out.x(j) += alpha * (z(static_cast<Eigen::Index>(i)) - out.x(j));
      }
      out.x(blocking) = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (in_passive[j] && out.x(j) <= 0.0) {
          in_passive[j] = false;
          out.x(j) = 0.0;
        }
      ++out.iterations;
      if (out.iterations >= max_iterations) break;
    }
  }
  out.residual = (a * out.x - b).norm();
  return out;
}

}  // namespace hilbmap
