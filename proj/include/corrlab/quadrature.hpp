#pragma once

#include <vector>

namespace corrlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; cached per n.
const QuadratureRule& gauss_legendre(int n);

/// `panels` equal panels over [a, b], `order` Gauss points each.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order = 16);

/// Appends a composite rule for [a, b] to `rule`.
void append_composite(QuadratureRule& rule, double a, double b, int panels, int order = 16);

/// Smooth step: 1 for rho <= r1, 0 for rho >= r2, C-infinity in between.
class Bump {
 public:
  Bump(double r1, double r2);

  double operator()(double rho) const;
  double inner() const { return r1_; }
  double outer() const { return r2_; }

 private:
  double r1_;
  double r2_;
};

}  // namespace corrlab
