#include <doctest.h>

#include <cmath>

#include "corrlab/quadrature.hpp"

using namespace corrlab;

TEST_SUITE("quadrature") {
  TEST_CASE("gauss-legendre is exact for polynomials of degree 2n-1") {
    for (int n : {2, 5, 16, 32}) {
      const auto& r = gauss_legendre(n);
      CHECK(r.nodes.size() == static_cast<size_t>(n));
      for (int p = 0; p <= 2 * n - 1; ++p) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
        double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
        CHECK(std::abs(s - exact) < 1e-13);
      }
    }
  }

  TEST_CASE("composite rule integrates smooth oscillatory functions") {
    auto r = composite_gauss_legendre(0.0, 10.0, 20, 16);
    double s = 0.0;
    for (size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::cos(3.0 * r.nodes[i]);
    CHECK(std::abs(s - std::sin(30.0) / 3.0) < 1e-13);
    QuadratureRule two;
    append_composite(two, -1.0, 0.0, 3);
    append_composite(two, 0.0, 2.0, 3);
    double e = 0.0;
    for (size_t i = 0; i < two.nodes.size(); ++i) e += two.weights[i] * std::exp(two.nodes[i]);
    CHECK(std::abs(e - (std::exp(2.0) - std::exp(-1.0))) < 1e-13);
  }

  TEST_CASE("bump is a smooth step with symmetric transition") {
    Bump b(0.5, 1.5);
    CHECK(b(0.0) == 1.0);
    CHECK(b(0.5) == 1.0);
    CHECK(b(1.5) == 0.0);
    CHECK(b(2.0) == 0.0);
    CHECK(std::abs(b(1.0) - 0.5) < 1e-15);
    for (double x : {0.6, 0.8, 1.1, 1.4}) CHECK(std::abs(b(x) + b(2.0 - x) - 1.0) < 1e-14);
    for (double x = 0.5; x < 1.5; x += 0.01) CHECK(b(x + 0.01) <= b(x));
    // Flat to all orders at the joins: values decay faster than any power.
    CHECK(1.0 - b(0.51) < 1e-30);
    CHECK(b(1.49) < 1e-30);
  }
}
