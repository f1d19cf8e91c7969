#include "corrlab/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "corrlab/quadrature.hpp"

namespace corrlab {

namespace {

constexpr double kPi = std::numbers::pi;

bool at_rest(const MomentumWavePacket& pk) { return pk.pbar.x == 0.0 && pk.pbar.y == 0.0 && pk.pbar.z == 0.0; }

// Node count for one axis of length `len`: enough for the oscillation, the
// Gaussian width and a floor that resolves the bump transition.
long axis_nodes(double len, double phase_rate, double gauss_width, const QuadratureOptions& q) {
  double nodes = q.nodes_per_period * phase_rate * len / (2.0 * kPi);
  if (gauss_width > 0.0) nodes += 8.0 * len / gauss_width;
  nodes = std::max(nodes, static_cast<double>(q.min_panels) * q.order);
  return static_cast<long>(std::ceil(nodes * q.refine));
}

int panels_for(long nodes, int order) { return static_cast<int>((nodes + order - 1) / order); }

void check_budget(long nodes, const QuadratureOptions& q) {
  if (nodes > q.max_nodes) {
    throw ComputeError("evaluate_position: oscillation exceeds grid resolution; recommended node count " +
                       std::to_string(nodes) + " > max_nodes " + std::to_string(q.max_nodes));
  }
}

// Radial rule over [0, r2] split at the plateau edge.
QuadratureRule radial_rule(const MomentumWavePacket& pk, double phase_rate, double gauss_width,
                           const QuadratureOptions& q, long& total) {
  QuadratureRule rule;
  const long n1 = axis_nodes(pk.r1, phase_rate, gauss_width, q);
  const long n2 = axis_nodes(pk.r2 - pk.r1, phase_rate, gauss_width, q);
  total = n1 + n2;
  check_budget(total, q);
  append_composite(rule, 0.0, pk.r1, panels_for(n1, q.order), q.order);
  append_composite(rule, pk.r1, pk.r2, panels_for(n2, q.order), q.order);
  return rule;
}

}  // namespace

void MomentumWavePacket::validate() const {
  if (!(mass > 0.0)) throw ComputeError("packet: mass must be positive");
  if (!(gamma >= 0.0)) throw ComputeError("packet: gamma must be nonnegative");
  if (!(r1 > 0.0 && r2 > r1)) throw ComputeError("packet: need 0 < r1 < r2");
  if (spatial_dim != 1 && spatial_dim != 3) throw ComputeError("packet: spatial_dim must be 1 or 3");
  if (spatial_dim == 1 && (pbar.y != 0.0 || pbar.z != 0.0)) throw ComputeError("packet: 1-d pbar must lie on x");
  if (!(pbar.t > 0.0) || std::abs(lorentz_square(pbar) - mass * mass) > 1e-9 * std::max(1.0, mass * mass)) {
    throw ComputeError("packet: pbar must be on shell with positive energy");
  }
}

double MomentumWavePacket::chi(const std::array<double, 3>& p) const {
  const double dx = p[0] - pbar.x;
  const double dy = spatial_dim == 3 ? p[1] - pbar.y : 0.0;
  const double dz = spatial_dim == 3 ? p[2] - pbar.z : 0.0;
  return amplitude * Bump(r1, r2)(std::sqrt(dx * dx + dy * dy + dz * dz));
}

cplx evaluate_position(const MomentumWavePacket& pk, const FourVector& x, double tau, const QuadratureOptions& q) {
  pk.validate();
  if (pk.gamma > 0.0 && !(tau > 0.0)) throw ComputeError("evaluate_position: tau must be positive when gamma > 0");
  const double m = pk.mass;
  const double g = pk.gamma * tau;
  const double gauss_width = g > 0.0 ? 1.0 / std::sqrt(2.0 * g) : 0.0;
  const Bump bump(pk.r1, pk.r2);
  const cplx I(0.0, 1.0);

  if (pk.spatial_dim == 1) {
    const double rate = std::abs(x.t) + std::abs(x.x);
    QuadratureRule rule;
    const long nin = axis_nodes(2.0 * pk.r1, rate, gauss_width, q);
    const long nout = axis_nodes(pk.r2 - pk.r1, rate, gauss_width, q);
    check_budget(nin + 2 * nout, q);
    const double c = pk.pbar.x;
    append_composite(rule, c - pk.r2, c - pk.r1, panels_for(nout, q.order), q.order);
    append_composite(rule, c - pk.r1, c + pk.r1, panels_for(nin, q.order), q.order);
    append_composite(rule, c + pk.r1, c + pk.r2, panels_for(nout, q.order), q.order);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double p = rule.nodes[i];
      const double w = std::sqrt(p * p + m * m);
      const double d = p - c;
      sum += rule.weights[i] * bump(std::abs(d)) * std::exp(-g * d * d) * std::exp(-I * (w * x.t - p * x.x)) / (2.0 * w);
    }
    return pk.amplitude * sum / (2.0 * kPi);
  }

  const double R = spatial_norm(x);
  if (at_rest(pk)) {
    long total = 0;
    const auto rule = radial_rule(pk, std::abs(x.t) + R, gauss_width, q, total);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double rho = rule.nodes[i];
      const double w = std::sqrt(rho * rho + m * m);
      const double sinc = R > 0.0 ? std::sin(rho * R) / (rho * R) : 1.0;
      sum += rule.weights[i] * rho * rho * bump(rho) * std::exp(-g * rho * rho) * sinc * std::exp(-I * (w * x.t)) / w;
    }
    return pk.amplitude * sum / (4.0 * kPi * kPi);
  }

  // General 3-d case: spherical coordinates centred on pbar.
  // The per-axis floor is cubed here, so it is taken much lower than in 1-d.
  QuadratureOptions q3 = q;
  q3.min_panels = std::min(q.min_panels, 4);
  const double rate = std::abs(x.t) + R;
  long nr = 0;
  const auto radial = radial_rule(pk, rate, gauss_width, q3, nr);
  const long nt = axis_nodes(kPi * pk.r2, rate, 0.0, q3);
  const long np = axis_nodes(2.0 * kPi * pk.r2, rate, 0.0, q3);
  check_budget(nr * nt * np, q);
  const auto ct = composite_gauss_legendre(-1.0, 1.0, panels_for(nt, q3.order), q3.order);
  const auto ph = composite_gauss_legendre(0.0, 2.0 * kPi, panels_for(np, q3.order), q3.order);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double rho = radial.nodes[i];
    const double radial_w = radial.weights[i] * rho * rho * bump(rho) * std::exp(-g * rho * rho);
    for (std::size_t j = 0; j < ct.nodes.size(); ++j) {
      const double c = ct.nodes[j];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (std::size_t k = 0; k < ph.nodes.size(); ++k) {
        const double px = pk.pbar.x + rho * s * std::cos(ph.nodes[k]);
        const double py = pk.pbar.y + rho * s * std::sin(ph.nodes[k]);
        const double pz = pk.pbar.z + rho * c;
        const double w = std::sqrt(px * px + py * py + pz * pz + m * m);
        const double phase = w * x.t - (px * x.x + py * x.y + pz * x.z);
        sum += radial_w * ct.weights[j] * ph.weights[k] * std::exp(-I * phase) / (2.0 * w);
      }
    }
  }
  return pk.amplitude * sum / (8.0 * kPi * kPi * kPi);
}

double position_bound(const MomentumWavePacket& packet, double tau, const QuadratureOptions& q) {
  return std::abs(evaluate_position(packet, FourVector{}, tau, q));
}

cplx oncone_normalizer(double m, double tau, double exponent) {
  const cplx I(0.0, 1.0);
  return 2.0 * m * std::pow(2.0 * kPi * I * tau / m, exponent) * std::exp(I * m * tau);
}

ConvergenceReport oncone_limit_check(const MomentumWavePacket& pk, const FourVector& v, const std::vector<double>& taus,
                                     double exponent, const QuadratureOptions& q) {
  pk.validate();
  if (pk.gamma != 0.0) throw ComputeError("oncone_limit_check: requires gamma = 0");
  if (!(v.t > 0.0) || std::abs(lorentz_square(v) - 1.0) > 1e-9) {
    throw ComputeError("oncone_limit_check: v must be future timelike with v^2 = 1");
  }
  const std::array<double, 3> classical{pk.mass * v.x, pk.mass * v.y, pk.mass * v.z};
  const double dx = classical[0] - pk.pbar.x, dy = classical[1] - pk.pbar.y, dz = classical[2] - pk.pbar.z;
  if (std::sqrt(dx * dx + dy * dy + dz * dz) > pk.r1) {
    throw ComputeError("oncone_limit_check: m v lies outside the plateau of chi");
  }
  ConvergenceReport rep;
  rep.target = pk.chi(classical);
  rep.taus = taus;
  const double tmax = taus.empty() ? 0.0 : *std::max_element(taus.begin(), taus.end());
  for (double tau : taus) {
    const cplx val = oncone_normalizer(pk.mass, tau, exponent) * evaluate_position(pk, tau * v, tau, q);
    rep.values.push_back(val);
    const double err = std::abs(val - rep.target) / std::abs(rep.target);
    rep.relative_errors.push_back(err);
    if (tau >= tmax / 10.0) rep.final_window_error = std::max(rep.final_window_error, err);
  }
  rep.converged = !taus.empty() && rep.final_window_error <= 0.05;
  return rep;
}

FalloffSeries falloff_fit(const MomentumWavePacket& pk, const FourVector& u, const std::vector<double>& taus,
                          const FitOptions& fit, const QuadratureOptions& q) {
  FalloffSeries s;
  s.taus = taus;
  for (double tau : taus) s.magnitudes.push_back(std::abs(evaluate_position(pk, tau * u, tau, q)));
  s.fit = fit_falloff(s.taus, s.magnitudes, pk.gamma, fit);
  return s;
}

Certificate contour_certificate(const MomentumWavePacket& pk, const FourVector& u, double alpha,
                                const CertificateOptions& opts) {
  pk.validate();
  if (pk.spatial_dim != 3) throw ComputeError("contour_certificate: three spatial dimensions required");
  if (!at_rest(pk)) throw ComputeError("contour_certificate: packet must be in its rest frame");
  if (!(pk.gamma > 0.0)) throw ComputeError("contour_certificate: gamma must be positive");
  if (!(alpha > 0.0)) throw ComputeError("contour_certificate: alpha must be positive");
  const double us = spatial_norm(u);
  if (us < opts.eps_hole) throw HoleExcludedError("contour_certificate: u lies in the hole around the time axis");

  Certificate cert;
  const double m = pk.mass;
  const double g = pk.gamma;
  const double ra = std::sqrt(alpha);
  if (ra >= pk.r1) {
    cert.reason = "q^2 <= alpha reaches outside the plateau of chi";
    return cert;
  }
  const std::array<double, 3> uhat{u.x / us, u.y / us, u.z / us};
  // Real part of the exponent at q = (a + i eta) uhat + b e_perp.
  const auto E = [&](double a, double b, double eta) {
    const cplx qq(a * a + b * b - eta * eta, 2.0 * eta * a);
    const cplx w = std::sqrt(qq + m * m);
    return g * (a * a + b * b - eta * eta) - eta * us + u.t * w.imag();
  };
  const double target = alpha * g;
  const int n = std::max(3, opts.grid);
  const int steps = 400;
  for (int i = 0; i < n; ++i) {
    const double a = -ra + 2.0 * ra * (i + 0.5) / n;
    for (int j = 0; j < n; ++j) {
      const double b = ra * (j + 0.5) / n;
      if (a * a + b * b >= alpha) continue;
      // Follow the shift continuously from eta = 0 in the direction where the
      // exponent grows; a turn before reaching the target means no continuous
      // deformation gets there.
      const double h0 = 1e-7 * m;
      const double dir = E(a, b, h0) >= E(a, b, -h0) ? 1.0 : -1.0;
      double best = std::numeric_limits<double>::infinity();
      double lo = 0.0;
      double e_lo = E(a, b, 0.0);
      for (int k = 1; k < steps; ++k) {
        const double hi = dir * m * k / steps;
        const double e_hi = E(a, b, hi);
        if (e_hi >= target) {
          double l = lo, h = hi;
          for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (l + h);
            (E(a, b, mid) >= target ? h : l) = mid;
          }
          best = std::abs(h);
          break;
        }
        if (e_hi < e_lo) break;
        lo = hi;
        e_lo = e_hi;
      }
      if (!std::isfinite(best)) {
        cert.reason = "no shift with |Im q| < m reaches alpha";
        cert.violating_q = std::array<double, 3>{a * uhat[0], a * uhat[1], a * uhat[2]};
        cert.max_imag_shift = m;
        return cert;
      }
      cert.max_imag_shift = std::max(cert.max_imag_shift, best);
    }
  }
  cert.granted = true;
  return cert;
}

}  // namespace corrlab
