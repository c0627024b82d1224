#pragma once

#include <Eigen/Dense>

namespace hilbmap {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||A x - b||
  int iterations = 0;
  bool converged = false;
};

// min ||A x - b|| subject to x >= 0, Lawson–Hanson active set. A column enters
// the passive set when its dual component exceeds dual_tol * ||A^T b||; ties
// go to the lowest index.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double dual_tol = 1e-12,
                int max_iterations = 0);

}  // namespace hilbmap
