#include "corrlab/falloff.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "corrlab/errors.hpp"

namespace corrlab {

std::string_view to_string(FalloffKind k) {
  switch (k) {
    case FalloffKind::power: return "power";
    case FalloffKind::exponential: return "exponential";
    case FalloffKind::superpoly: return "superpoly";
  }
  return "?";
}

namespace {

struct LinearFit {
  Eigen::VectorXd coef;
  double max_residual = 0.0;
};

LinearFit least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
  LinearFit f;
  f.coef = A.colPivHouseholderQr().solve(y);
  f.max_residual = (y - A * f.coef).cwiseAbs().maxCoeff();
  return f;
}

}  // namespace

FalloffFit fit_falloff(const std::vector<double>& taus, const std::vector<double>& mags, double gamma,
                       const FitOptions& opts) {
  if (taus.size() != mags.size()) throw ComputeError("fit_falloff: tau and magnitude counts differ");
  FalloffFit out;
  std::vector<double> t, y;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (mags[i] > 1e-300 && std::isfinite(mags[i])) {
      t.push_back(taus[i]);
      y.push_back(std::log(mags[i]));
    }
  }
  if (t.empty()) {
    out.underflow = true;
    return out;
  }
  if (t.size() < 4) throw ComputeError("fit_falloff: need at least four usable points");
  const auto n = static_cast<Eigen::Index>(t.size());
  out.tau_min = t.front();
  out.tau_max = t.back();

  Eigen::VectorXd Y(n);
  Eigen::MatrixXd P(n, 2), E(n, 3), S(n, 3), R(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    Y[i] = y[i];
    P.row(i) << 1.0, -std::log(t[i]);
    E.row(i) << 1.0, -std::log(t[i]), -t[i];
    S.row(i) << 1.0, -std::log(t[i]), -std::sqrt(t[i]);
    R.row(i) << 1.0, -t[i];
  }
  const auto p = least_squares(P, Y);
  const auto e = least_squares(E, Y);
  const auto s = least_squares(S, Y);
  const auto r = least_squares(R, Y);
  out.power_residual = p.max_residual;
  out.exponential_residual = e.max_residual;
  out.superpoly_residual = s.max_residual;
  out.raw_rate = r.coef[1];
  out.raw_C = std::exp(r.coef[0]);

  const int w = std::max(2, opts.window);
  for (Eigen::Index start = 0; start + w <= n; start += w) {
    Eigen::MatrixXd A(w, 2);
    Eigen::VectorXd b(w);
    for (int j = 0; j < w; ++j) {
      A.row(j) << 1.0, -std::log(t[start + j]);
      b[j] = y[start + j];
    }
    const auto f = least_squares(A, b);
    out.windows.push_back({std::sqrt(t[start] * t[start + w - 1]), f.coef[1]});
  }
  out.windows_increasing = out.windows.size() >= 2;
  for (std::size_t i = 1; i < out.windows.size(); ++i) {
    if (!(out.windows[i].exponent > out.windows[i - 1].exponent)) out.windows_increasing = false;
  }

  const bool exp_ok = e.coef[2] > 0.0 && e.max_residual <= opts.fit_tol;
  const bool super_ok = s.coef[2] > 0.0 && out.windows_increasing;
  if (p.max_residual <= opts.power_tol || (!exp_ok && !super_ok)) {
    out.kind = FalloffKind::power;
    out.exponent_or_rate = p.coef[1];
    out.prefactor_power = p.coef[1];
    out.C = std::exp(p.coef[0]);
    out.residual = p.max_residual;
  } else if (exp_ok && (!super_ok || e.max_residual <= s.max_residual)) {
    out.kind = FalloffKind::exponential;
    out.exponent_or_rate = e.coef[2];
    out.prefactor_power = e.coef[1];
    out.C = std::exp(e.coef[0]);
    out.residual = e.max_residual;
    if (gamma > 0.0) out.alpha = e.coef[2] / gamma;
  } else {
    out.kind = FalloffKind::superpoly;
    out.exponent_or_rate = out.windows.empty() ? 0.0 : out.windows.back().exponent;
    out.prefactor_power = s.coef[1];
    out.stretched_coefficient = s.coef[2];
    out.C = std::exp(s.coef[0]);
    out.residual = s.max_residual;
  }
  return out;
}

}  // namespace corrlab
