#pragma once

#include <functional>

#include <Eigen/Dense>

namespace corrlab {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LeastSquaresOptions {
  int max_iters = 200;
  double tol_residual = 1e-13;  // stop once ||r|| drops below this
  double tol_step = 1e-15;      // relative step size
  double lambda0 = 1e-3;
};

struct LeastSquaresResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;  // residual or step tolerance met before max_iters
};

// Central differences; exact up to round-off for the quadratic residuals
// used by the Landau system.
Eigen::MatrixXd numeric_jacobian(const ResidualFn& f, const Eigen::VectorXd& x);

LeastSquaresResult levenberg_marquardt(const ResidualFn& f, Eigen::VectorXd x0,
                                       const LeastSquaresOptions& opts = {});

// Gauss-Newton with minimum-norm steps. For an underdetermined system this
// maps a start point to a nearby zero of f, smoothly in the start point.
LeastSquaresResult project_min_norm(const ResidualFn& f, Eigen::VectorXd x0,
                                    const LeastSquaresOptions& opts = {});

}  // namespace corrlab
