#include "corrlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "corrlab/errors.hpp"

namespace corrlab {

namespace {

QuadratureRule build_gauss_legendre(int n) {
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi's initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw ComputeError("gauss_legendre: need at least one node");
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

void append_composite(QuadratureRule& rule, double a, double b, int panels, int order) {
  const auto& gl = gauss_legendre(order);
  const double h = (b - a) / panels;
  rule.nodes.reserve(rule.nodes.size() + static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(rule.weights.size() + static_cast<std::size_t>(panels) * order);
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(lo + 0.5 * h * (gl.nodes[i] + 1.0));
      rule.weights.push_back(0.5 * h * gl.weights[i]);
    }
  }
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order) {
  QuadratureRule r;
  append_composite(r, a, b, panels, order);
  return r;
}

Bump::Bump(double r1, double r2) : r1_(r1), r2_(r2) {
  if (!(r1 >= 0.0 && r2 > r1)) throw ComputeError("bump: need 0 <= r1 < r2");
}

double Bump::operator()(double rho) const {
  if (rho <= r1_) return 1.0;
  if (rho >= r2_) return 0.0;
  const double s = (rho - r1_) / (r2_ - r1_);
  const double a = std::exp(-1.0 / (1.0 - s));
  const double b = std::exp(-1.0 / s);
  return a / (a + b);
}

}  // namespace corrlab
