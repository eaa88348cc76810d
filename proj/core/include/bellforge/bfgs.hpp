#pragma once

#include <Eigen/Core>
#include <functional>

namespace bellforge {

struct BfgsOptions {
  int max_evaluations = 40000;
  int max_iterations = 600;
  double gradient_tol = 1e-8;
  double finite_diff_step = 1e-6;  // central differences
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Quasi-Newton minimizer with an inverse-BFGS update, numeric central-
// difference gradients and a backtracking Armijo line search.
BfgsResult bfgs_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                         Eigen::VectorXd x0, const BfgsOptions& opt = {});

}  // namespace bellforge
