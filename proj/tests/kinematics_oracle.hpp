#pragma once

// Independent two-body kinematics used as a test oracle: configurations are
// built explicitly in the rest frame of the (a+b) pair, where the pole
// condition reads s_ab = m_c^2, then boosted.

#include <array>
#include <cmath>
#include <random>

#include "corrlab/diagram.hpp"

namespace oracle {

using corrlab::FourVector;

inline FourVector boost(const FourVector& p, const std::array<double, 3>& beta) {
  const double b2 = beta[0] * beta[0] + beta[1] * beta[1] + beta[2] * beta[2];
  if (b2 == 0.0) return p;
  const double g = 1.0 / std::sqrt(1.0 - b2);
  const double bp = beta[0] * p.x + beta[1] * p.y + beta[2] * p.z;
  const double k = (g - 1.0) * bp / b2 + g * p.t;
  return {g * (p.t + bp), p.x + k * beta[0], p.y + k * beta[1], p.z + k * beta[2]};
}

inline std::array<double, 3> random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double x = n(rng), y = n(rng), z = n(rng);
  const double r = std::sqrt(x * x + y * y + z * z);
  return {x / r, y / r, z / r};
}

// Two-body momentum of a decay M -> m1 + m2 in the parent rest frame.
inline double two_body_momentum(double M, double m1, double m2) {
  const double a = M * M - (m1 + m2) * (m1 + m2);
  const double b = M * M - (m1 - m2) * (m1 - m2);
  return std::sqrt(std::max(0.0, a * b)) / (2.0 * M);
}

// External momenta for corrlab::fixtures::pole() with (k_a + k_b)^2 = s_ab.
inline corrlab::KConfiguration pole_configuration(double s_ab, std::mt19937_64& rng) {
  const double m = 1.0, md = 1.5, me = 1.5;
  const double rs = std::sqrt(s_ab);
  const double pstar = two_body_momentum(rs, m, m);
  const auto n = random_direction(rng);
  const FourVector ka{rs / 2, pstar * n[0], pstar * n[1], pstar * n[2]};
  const FourVector kb{rs / 2, -pstar * n[0], -pstar * n[1], -pstar * n[2]};

  std::normal_distribution<double> mom(0.0, 0.7);
  const FourVector kc = corrlab::on_shell(m, mom(rng), mom(rng), mom(rng));
  const FourVector Q = ka + kb + kc;
  const double M = std::sqrt(corrlab::lorentz_square(Q));
  const double p = two_body_momentum(M, md, me);
  const auto u = random_direction(rng);
  const FourVector pd_rest{std::sqrt(md * md + p * p), p * u[0], p * u[1], p * u[2]};
  const FourVector pe_rest{std::sqrt(me * me + p * p), -p * u[0], -p * u[1], -p * u[2]};
  const std::array<double, 3> bq{Q.x / Q.t, Q.y / Q.t, Q.z / Q.t};
  const FourVector pd = boost(pd_rest, bq);
  const FourVector pe = boost(pe_rest, bq);

  std::uniform_real_distribution<double> speed(0.0, 0.6);
  const auto dir = random_direction(rng);
  const double v = speed(rng);
  const std::array<double, 3> b{v * dir[0], v * dir[1], v * dir[2]};
  corrlab::KConfiguration k;
  k.momenta = {boost(ka, b), boost(kb, b), boost(kc, b), -boost(pd, b), -boost(pe, b)};
  // Restore exact conservation lost to round-off in the boosts.
  FourVector total;
  for (const auto& x : k.momenta) total += x;
  k.momenta[4] -= total;
  return k;
}

}  // namespace oracle
