#include <doctest.h>

#include <cmath>
#include <numbers>

#include "corrlab/classical.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/quadrature.hpp"

using namespace corrlab;

namespace {

PhaseSpaceDensity packet_density() {
  MomentumWavePacket pk;
  pk.mass = 10.0;
  pk.pbar = {10.0, 0.0, 0.0, 0.0};
  pk.r1 = 1.0;
  pk.r2 = 3.0;
  PhaseSpaceDensity rho;
  rho.mass = 10.0;
  rho.packet = pk;
  for (auto& a : rho.position) a = {ProfileKind::compact, 0.0, 1.0};
  return rho;
}

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(a * std::pow(b / a, double(i) / (n - 1)));
  return t;
}

}  // namespace

TEST_SUITE("classical") {
  TEST_CASE("sampling moments, determinism and empty draws") {
    PhaseSpaceDensity rho;
    rho.mass = 2.0;
    rho.position = {AxisProfile{ProfileKind::gaussian, 1.0, 0.5}, AxisProfile{ProfileKind::compact, -2.0, 1.0},
                    AxisProfile{ProfileKind::gaussian, 0.0, 2.0}};
    rho.momentum = {AxisProfile{ProfileKind::gaussian, 0.3, 0.1}, AxisProfile{ProfileKind::gaussian, 0.0, 0.2},
                    AxisProfile{ProfileKind::compact, 0.5, 0.2}};
    const int n = 20000;
    auto s = sample_density(rho, n, 42);
    REQUIRE(s.size() == n);
    double mx = 0, mp = 0, mc = 0;
    for (const auto& x : s) {
      mx += x.x[0] / n;
      mp += x.p[0] / n;
      mc += x.x[1] / n;
    }
    CHECK(std::abs(mx - 1.0) < 4.0 * 0.5 / std::sqrt(n));
    CHECK(std::abs(mp - 0.3) < 4.0 * 0.1 / std::sqrt(n));
    CHECK(std::abs(mc + 2.0) < 4.0 * 1.0 / std::sqrt(n));
    auto again = sample_density(rho, 10, 42);
    for (int i = 0; i < 10; ++i) CHECK(again[i].x == s[i].x);
    CHECK(sample_density(rho, 0, 1).empty());
    rho.position[0].width = -1.0;
    CHECK_THROWS_AS(sample_density(rho, 1, 1), ComputeError);
  }

  TEST_CASE("profile densities are normalized") {
    auto r = composite_gauss_legendre(-4.0, 5.0, 90, 16);
    AxisProfile c{ProfileKind::compact, 0.5, 2.0};
    AxisProfile g{ProfileKind::gaussian, 0.5, 0.4};
    double sc = 0, sg = 0;
    for (size_t i = 0; i < r.nodes.size(); ++i) {
      sc += r.weights[i] * c.density(r.nodes[i]);
      sg += r.weights[i] * g.density(r.nodes[i]);
    }
    CHECK(std::abs(sc - 1.0) < 1e-10);
    CHECK(std::abs(sg - 1.0) < 1e-10);
  }

  TEST_CASE("free propagation") {
    PhaseSample s{{0, 0, 0}, {0.1, 0, 0}};
    auto x = propagate_free(s, 10.0, 1.0);
    CHECK(std::abs(x[0] - 1.0) < 1e-15);
    PhaseSample t{{1, 2, 3}, {0.4, -0.2, 0.0}};
    CHECK(propagate_free(t, 0.0, 2.0) == t.x);
    PhaseSample still{{1, 2, 3}, {0, 0, 0}};
    CHECK(propagate_free(still, 1e6, 2.0) == still.x);
    auto a = propagate_free(t, 1.0, 2.0), b = propagate_free(t, 3.0, 2.0), c = propagate_free(t, 2.0, 2.0);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(0.5 * (a[i] + b[i]) - c[i]) < 1e-14);
  }

  TEST_CASE("asymptotic density conserves probability for the 3/2 exponent") {
    auto rho = packet_density();
    // int d^3x rho(x, t) = t^3 int d^3u, done in spherical shells of u.
    auto shells = composite_gauss_legendre(0.0, 0.3, 30, 16);
    auto total = [&](double t, double e) {
      double s = 0.0;
      for (size_t i = 0; i < shells.nodes.size(); ++i) {
        double u = shells.nodes[i];
        s += shells.weights[i] * 4.0 * std::numbers::pi * u * u * asymptotic_position_density(rho, {u, 0, 0}, t, e);
      }
      return s * t * t * t;
    };
    CHECK(std::abs(total(100.0, 1.5) - 1.0) < 1e-8);
    CHECK(std::abs(total(1000.0, 1.5) - 1.0) < 1e-8);
    CHECK(std::abs(total(1000.0, 2.0 / 3.0) / total(100.0, 2.0 / 3.0) - 1.0) > 1.0);
    // Suppressed outside the momentum support.
    CHECK(asymptotic_position_density(rho, {0.5, 0, 0}, 100.0) == 0.0);
    CHECK(asymptotic_density(rho, {0.05, 0, 0}, {0.5, 0, 0}, 100.0) > 0.0);
  }

  TEST_CASE("histogram of propagated samples approaches the asymptotic density") {
    auto rho = packet_density();
    for (double u : {0.0, 0.05, 0.15}) {
      auto d = classical_density(rho, {u, 0, 0}, 2000.0, 0.02, 400000, 9);
      double a = asymptotic_position_density(rho, {u, 0, 0}, 2000.0);
      CHECK(std::abs(d.density - a) < 3.0 * d.statistical_error + 1e-3 * a);
    }
  }

  TEST_CASE("undisplaced packets with aligned momenta show no exponential suppression") {
    auto rho = packet_density();
    std::vector<double> taus = log_grid(50.0, 800.0, 8), p;
    for (double tau : taus) {
      OverlapPacket a{rho, FourVector{}, Orientation::initial};
      OverlapPacket b{rho, FourVector{}, Orientation::final};
      auto e = overlap_probability({a, b}, tau, 1.0, 3200, 5);
      CHECK_FALSE(e.upper_bound);
      CHECK(e.region_radius == doctest::Approx(std::sqrt(tau)));
      p.push_back(e.probability);
    }
    auto f = fit_falloff(taus, p, 0.0);
    CHECK(f.kind == FalloffKind::power);
    CHECK(std::abs(f.exponent_or_rate) < 0.1);
  }

  TEST_CASE("transverse displacement gives exponential decay and is monotone") {
    const double g = 0.1;
    auto run = [&](double tau, double b, std::uint64_t seed) {
      OverlapPacket a{gaussian_packet_density(1.0, {0, 0, 0}, g, tau), FourVector{}, Orientation::initial};
      OverlapPacket d{point_density(1.0, {0, 0, 0}, {0, 0, 0}), FourVector{2.0, b, 0.0, 0.0}, Orientation::final};
      return overlap_probability({a, d}, tau, 1.0, 16000, seed);
    };
    std::vector<double> taus, p;
    for (int i = 0; i < 10; ++i) {
      taus.push_back(300.0 + 130.0 * i);
      p.push_back(run(taus.back(), 0.6, 3).probability);
    }
    auto f = fit_falloff(taus, p, g);
    CHECK(f.kind == FalloffKind::exponential);
    double predicted = 2.0 * g * 0.36 / (4.0 * g * g + 4.0);
    CHECK(std::abs(f.exponent_or_rate - predicted) < 0.2 * predicted);

    double last = 1.0;
    for (double b : {0.0, 0.2, 0.4, 0.6, 0.8}) {
      auto e = run(400.0, b, 8);
      CHECK(e.probability <= last * 1.05);
      CHECK(e.weighted == (b > 0.0));
      last = e.probability;
    }
  }

  TEST_CASE("overlap preconditions") {
    OverlapPacket a{gaussian_packet_density(1.0, {0, 0, 0}, 0.1, 10.0), FourVector{}, Orientation::initial};
    CHECK_THROWS_AS(overlap_probability({a}, 10.0, 1.0, 1000, 1), ComputeError);
    OverlapOptions o;
    o.batches = 4;
    CHECK_THROWS_AS(overlap_probability({a, a}, 10.0, 1.0, 1000, 1, o), ComputeError);
    // A final detector before the source is prepared: nothing overlaps.
    OverlapPacket src{point_density(1.0, {0, 0, 0}, {0, 0, 0}), FourVector{}, Orientation::initial};
    OverlapPacket det{point_density(1.0, {0, 0, 0}, {0, 0, 0}), FourVector{-5.0, 3.0, 0.0, 0.0}, Orientation::final};
    auto e = overlap_probability({src, det}, 100.0, 0.5, 1600, 1);
    CHECK(e.upper_bound);
    CHECK(e.probability > 0.0);
  }

  TEST_CASE("comparison verdicts") {
    FalloffFit c, q;
    c.kind = q.kind = FalloffKind::power;
    c.tau_min = q.tau_min = 10;
    c.tau_max = q.tau_max = 100;
    c.exponent_or_rate = 3.05;
    q.exponent_or_rate = 1.5;
    auto r = correspondence_compare(c, q);
    CHECK(r.corresponds);
    CHECK(r.quantum_doubled == 3.0);
    c.kind = FalloffKind::exponential;
    CHECK_FALSE(correspondence_compare(c, q).corresponds);
    CHECK_FALSE(correspondence_compare(c, q).kinds_match);
    q.kind = FalloffKind::exponential;
    c.exponent_or_rate = 0.018;
    q.exponent_or_rate = 0.01;
    CHECK(correspondence_compare(c, q).corresponds);
    c.exponent_or_rate = 0.03;
    CHECK_FALSE(correspondence_compare(c, q).corresponds);
    c.tau_min = 200;
    c.tau_max = 300;
    CHECK_THROWS_AS(correspondence_compare(c, q), ComputeError);
  }
}
