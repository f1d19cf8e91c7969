#include <doctest.h>

#include <cmath>

#include "corrlab/errors.hpp"
#include "corrlab/falloff.hpp"

using namespace corrlab;

namespace {

std::vector<double> geometric(double a, double b, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(a * std::pow(b / a, double(i) / (n - 1)));
  return t;
}

}  // namespace

TEST_SUITE("falloff") {
  TEST_CASE("pure power law") {
    auto t = geometric(10, 1000, 15);
    std::vector<double> y;
    for (double x : t) y.push_back(3.0 * std::pow(x, -1.5));
    auto f = fit_falloff(t, y, 0.0);
    CHECK(f.kind == FalloffKind::power);
    CHECK(std::abs(f.exponent_or_rate - 1.5) < 1e-9);
    CHECK(std::abs(f.C - 3.0) < 1e-8);
  }

  TEST_CASE("power times exponential") {
    std::vector<double> t, y;
    for (int i = 0; i < 16; ++i) {
      double x = 50.0 + 30.0 * i;
      t.push_back(x);
      y.push_back(2.0 * std::pow(x, -1.5) * std::exp(-0.02 * x));
    }
    auto f = fit_falloff(t, y, 0.1);
    CHECK(f.kind == FalloffKind::exponential);
    CHECK(std::abs(f.exponent_or_rate - 0.02) < 1e-8);
    CHECK(std::abs(f.alpha - 0.2) < 1e-7);
    CHECK(std::abs(f.prefactor_power - 1.5) < 1e-6);
  }

  TEST_CASE("stretched exponential is faster than any power") {
    auto t = geometric(5, 500, 25);
    std::vector<double> y;
    for (double x : t) y.push_back(std::exp(-2.0 * std::sqrt(x)) / x);
    auto f = fit_falloff(t, y, 0.0);
    CHECK(f.kind == FalloffKind::superpoly);
    CHECK(f.windows_increasing);
    CHECK(std::abs(f.stretched_coefficient - 2.0) < 1e-6);
    for (size_t i = 1; i < f.windows.size(); ++i) CHECK(f.windows[i].exponent > f.windows[i - 1].exponent);
  }

  TEST_CASE("degenerate inputs") {
    CHECK_THROWS_AS(fit_falloff({1, 2, 3}, {1, 0.5, 0.3}, 0.0), ComputeError);
    CHECK_THROWS_AS(fit_falloff({1, 2, 3, 4}, {1, 0.5, 0.3}, 0.0), ComputeError);
    auto f = fit_falloff({1, 2, 3, 4, 5}, {0, 0, 0, 0, 0}, 0.0);
    CHECK(f.underflow);
  }
}
