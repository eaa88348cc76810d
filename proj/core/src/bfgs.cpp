#include "bellforge/bfgs.hpp"

#include <cmath>

namespace bellforge {

BfgsResult bfgs_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                         Eigen::VectorXd x0, const BfgsOptions& opt) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const int n = static_cast<int>(x0.size());

  BfgsResult res;
  res.x = std::move(x0);
  res.value = f(res.x);
  res.evaluations = 1;

  auto gradient = [&](const VectorXd& x) {
    VectorXd g(n);
    VectorXd xp = x;
    for (int i = 0; i < n; ++i) {
      const double h = opt.finite_diff_step * std::max(1.0, std::abs(x(i)));
      xp(i) = x(i) + h;
      const double fp = f(xp);
      xp(i) = x(i) - h;
      const double fm = f(xp);
      xp(i) = x(i);
      g(i) = (fp - fm) / (2.0 * h);
    }
    res.evaluations += 2 * n;
    return g;
  };

  MatrixXd hinv = MatrixXd::Identity(n, n);
  VectorXd g = gradient(res.x);

  for (int it = 0; it < opt.max_iterations; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < opt.gradient_tol) {
      res.converged = true;
      return res;
    }
    if (res.evaluations >= opt.max_evaluations) return res;

    VectorXd d = -hinv * g;
    double slope = g.dot(d);
    if (slope >= 0.0) {  // lost positive definiteness; restart from steepest descent
      hinv.setIdentity();
      d = -g;
      slope = g.dot(d);
    }

    double step = 1.0;
    double fx = res.value;
    VectorXd xn;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      xn = res.x + step * d;
      const double fn = f(xn);
      ++res.evaluations;
      if (fn <= fx + 1e-4 * step * slope) {
        fx = fn;
        accepted = true;
        break;
      }
      step *= 0.5;
      if (res.evaluations >= opt.max_evaluations) return res;
    }
    if (!accepted) {
      res.converged = g.lpNorm<Eigen::Infinity>() < 1e2 * opt.gradient_tol;
      return res;
    }

    const VectorXd gn = gradient(xn);
    const VectorXd s = xn - res.x;
    const VectorXd yv = gn - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      const double rho = 1.0 / sy;
      const MatrixXd eye = MatrixXd::Identity(n, n);
      hinv = (eye - rho * s * yv.transpose()) * hinv * (eye - rho * yv * s.transpose()) +
             rho * s * s.transpose();
    }
    res.x = xn;
    res.value = fx;
    g = gn;
  }
  return res;
}

}  // namespace bellforge
